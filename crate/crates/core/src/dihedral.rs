//! The four geodesic conjugators `x_l(k)` across an edge `[s_i s_j]` with
//! label `n`, and exact arithmetic for them in the dihedral group
//! `⟨s_i, s_j⟩` of order `2n`.
//!
//! Elements are stored as `r^rot · s_i^refl` with `r = s_i s_j`. Each
//! `x_l(k)` satisfies `s_i · x s_j x⁻¹ = (s_i s_j)^k`.

use crate::diagram::Gen;
use crate::word::Word;

pub fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Euler's totient by trial division.
pub fn totient(n: u32) -> u32 {
    (1..n).filter(|&k| gcd(k, n) == 1).count() as u32
}

/// Units of `Z/n` in increasing order: the admissible exponents `k`.
pub fn coprime_residues(n: u32) -> Vec<u32> {
    (1..n).filter(|&k| gcd(k, n) == 1).collect()
}

fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = extended_gcd(b, a.rem_euclid(b));
        (g, y, x - (a / b) * y)
    }
}

/// Inverse of `k` modulo `n`, when `gcd(k, n) = 1`.
pub fn mod_inverse(k: u32, n: u32) -> Option<u32> {
    let (g, x, _) = extended_gcd(k as i64, n as i64);
    (g == 1).then(|| x.rem_euclid(n as i64) as u32)
}

/// The unique `k'` in `[1, n-1]` with `k k' + 1 = d n`, together with `d`.
pub fn negated_inverse(k: u32, n: u32) -> Option<(u32, u32)> {
    let inv = mod_inverse(k, n)?;
    let kp = (n - inv) % n;
    if kp == 0 {
        return None;
    }
    Some((kp, (k * kp + 1) / n))
}

/// Group law on the index set `{1,2,3,4}` of the `x_l`, as XOR on the bit
/// pair (leading `s_i`, trailing `s_j`): 1=(0,0), 2=(0,1), 3=(1,0), 4=(1,1).
pub fn klein(l: u8, lp: u8) -> u8 {
    let bits = |l: u8| l - 1;
    (bits(l) ^ bits(lp)) + 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dihedral {
    pub n: u32,
    pub rot: u32,
    pub refl: bool,
}

impl Dihedral {
    pub fn identity(n: u32) -> Self {
        Dihedral {
            n,
            rot: 0,
            refl: false,
        }
    }

    pub fn s_i(n: u32) -> Self {
        Dihedral {
            n,
            rot: 0,
            refl: true,
        }
    }

    /// `s_j = r⁻¹ s_i`.
    pub fn s_j(n: u32) -> Self {
        Dihedral {
            n,
            rot: n - 1,
            refl: true,
        }
    }

    /// `r^{n/2} = (s_i s_j)^{n/2}`, central for even `n`.
    pub fn center(n: u32) -> Self {
        Dihedral {
            n,
            rot: n / 2,
            refl: false,
        }
    }

    pub fn mul(self, other: Dihedral) -> Dihedral {
        debug_assert_eq!(self.n, other.n);
        let n = self.n;
        let q = if self.refl {
            (n - other.rot) % n
        } else {
            other.rot
        };
        Dihedral {
            n,
            rot: (self.rot + q) % n,
            refl: self.refl ^ other.refl,
        }
    }

    pub fn inverse(self) -> Dihedral {
        if self.refl {
            self
        } else {
            Dihedral {
                n: self.n,
                rot: (self.n - self.rot) % self.n,
                refl: false,
            }
        }
    }

    /// Evaluates a word in the two letters `si`, `sj`; `None` if another
    /// letter occurs.
    pub fn from_word(w: &Word, si: Gen, sj: Gen, n: u32) -> Option<Dihedral> {
        let mut acc = Dihedral::identity(n);
        for &g in w.letters() {
            let x = if g == si {
                Dihedral::s_i(n)
            } else if g == sj {
                Dihedral::s_j(n)
            } else {
                return None;
            };
            acc = acc.mul(x);
        }
        Some(acc)
    }

    /// The automorphism `s_i ↦ s_i, s_j ↦ s_i (s_i s_j)^k`, i.e. `r ↦ r^k`.
    pub fn twist(self, k: u32) -> Dihedral {
        Dihedral {
            n: self.n,
            rot: (self.rot as u64 * k as u64 % self.n as u64) as u32,
            refl: self.refl,
        }
    }

    /// A shortest word for this element.
    pub fn to_word(self, si: Gen, sj: Gen) -> Word {
        let n = self.n as usize;
        let p = self.rot as usize;
        if !self.refl {
            if p <= n / 2 {
                Word::alternating(si, sj, p)
            } else {
                Word::alternating(sj, si, n - p)
            }
        } else {
            // r^p s_i = (s_i s_j)^p s_i = (s_j s_i)^(n-p-1) s_j
            let q = (n - p - 1) % n;
            if p <= q {
                Word::alternating(si, sj, p).concat(&Word::letter(si))
            } else {
                Word::alternating(sj, si, q).concat(&Word::letter(sj))
            }
        }
    }
}

/// One of the four geodesic words `x_l(k)` for the edge `[si sj]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct XWord {
    pub si: Gen,
    pub sj: Gen,
    pub n: u32,
    pub l: u8,
    pub k: u32,
}

impl XWord {
    pub fn new(si: Gen, sj: Gen, n: u32, l: u8, k: u32) -> Self {
        XWord { si, sj, n, l, k }
    }

    pub fn is_valid(&self) -> bool {
        (1..=4).contains(&self.l)
            && self.n % 2 == 0
            && self.k >= 1
            && self.k < self.n
            && gcd(self.k, self.n) == 1
    }

    /// Literal expansion of the four formulas:
    /// `x_1 = (s_j s_i)^{(k-1)/2}`, `x_2 = x_1 s_j`,
    /// `x_3 = (s_i s_j)^{(n-k-1)/2} s_i`, `x_4 = (s_i s_j)^{(n-k+1)/2}`.
    pub fn word(&self) -> Word {
        let (si, sj, n, k) = (self.si, self.sj, self.n as i64, self.k as i64);
        match self.l {
            1 => Word::alternating(sj, si, ((k - 1) / 2) as usize),
            2 => Word::alternating(sj, si, ((k - 1) / 2) as usize).concat(&Word::letter(sj)),
            3 => Word::alternating(si, sj, ((n - k - 1) / 2) as usize).concat(&Word::letter(si)),
            4 => Word::alternating(si, sj, ((n - k + 1) / 2) as usize),
            l => panic!("x_l index out of range: {l}"),
        }
    }

    pub fn element(&self) -> Dihedral {
        Dihedral::from_word(&self.word(), self.si, self.sj, self.n)
            .expect("x_l(k) uses only s_i and s_j")
    }

    fn with(&self, l: u8, k: u32) -> XWord {
        XWord { l, k, ..*self }
    }

    /// The index `l` with `x_l(k) = g`, if any.
    pub fn locate(&self, k: u32, g: Dihedral) -> Option<XWord> {
        (1..=4).map(|l| self.with(l, k)).find(|x| x.element() == g)
    }

    /// The edge part of a composite `φ' ∘ φ`, where `self` belongs to `φ`
    /// and `outer` to `φ'`: the element `γ'(x) · x'` with `γ'` the twist
    /// `r ↦ r^{k'}`, written as `x_L(k k' mod n)`.
    pub fn compose(&self, outer: &XWord) -> XWord {
        let g = self.element().twist(outer.k).mul(outer.element());
        let k = ((self.k as u64 * outer.k as u64) % self.n as u64) as u32;
        self.locate(k, g)
            .expect("composite of conjugators is again a conjugator")
    }

    /// The conjugator `x''` with `x.compose(x'')` the identity word.
    pub fn inverse(&self) -> XWord {
        let k = mod_inverse(self.k, self.n).expect("k is a unit mod n");
        let g = self.element().twist(k).inverse();
        self.locate(k, g).expect("inverse conjugator exists")
    }

    pub fn identity(si: Gen, sj: Gen, n: u32) -> XWord {
        XWord::new(si, sj, n, 1, 1)
    }

    pub fn is_identity(&self) -> bool {
        self.l == 1 && self.k == 1
    }

    /// Splits a leading `s_i` off `x_3`/`x_4`: `x_3(k) = s_i x_1(n-k)`,
    /// `x_4(k) = s_i x_2(n-k)`.
    pub fn strip_leading(&self) -> Option<XWord> {
        match self.l {
            3 => Some(self.with(1, self.n - self.k)),
            4 => Some(self.with(2, self.n - self.k)),
            _ => None,
        }
    }

    /// `s_i · x_l(k)`, which is again a conjugator with exponent `n - k`.
    pub fn prepend_leading(&self) -> XWord {
        let g = Dihedral::s_i(self.n).mul(self.element());
        self.locate(self.n - self.k, g)
            .expect("s_i x_l(k) is a conjugator")
    }

    /// `x_l(k) · z` for `z` in the centralizer of `s_j` inside the dihedral
    /// group, rewritten as `x_{l'}(k)`.
    pub fn absorb_right(&self, z: Dihedral) -> Option<XWord> {
        self.locate(self.k, self.element().mul(z))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::CoxeterDiagram;
    use crate::oracle::Oracle;

    fn edge(n: u32) -> (CoxeterDiagram, Gen, Gen) {
        let d = CoxeterDiagram::parse(&format!("edge i j {n}")).unwrap();
        let si = d.gen("i").unwrap();
        let sj = d.gen("j").unwrap();
        (d, si, sj)
    }

    #[test]
    fn expansions() {
        let (d, si, sj) = edge(4);
        let x = |l, k| XWord::new(si, sj, 4, l, k).word().render(&d);
        assert_eq!(x(1, 1), "1");
        assert_eq!(x(3, 1), "i j i");
        assert_eq!(x(4, 3), "i j");
        assert_eq!(x(1, 3), "j i");
        assert_eq!(x(2, 1), "j");
    }

    #[test]
    fn totient_by_enumeration() {
        assert_eq!(totient(4), 2);
        assert_eq!(totient(6), 2);
        assert_eq!(totient(8), 4);
        assert_eq!(totient(12), 4);
        assert_eq!(coprime_residues(8), vec![1, 3, 5, 7]);
    }

    #[test]
    fn negated_inverse_is_unique_by_brute_force() {
        for n in (4..=12).step_by(2) {
            for k in coprime_residues(n) {
                let brute: Vec<u32> = (1..n)
                    .filter(|&kp| (k * kp + 1) % n == 0 && gcd(kp, n) == 1)
                    .collect();
                assert_eq!(brute.len(), 1, "n={n} k={k}");
                let (kp, d) = negated_inverse(k, n).unwrap();
                assert_eq!(kp, brute[0]);
                assert_eq!(k * kp + 1, d * n);
            }
        }
        assert_eq!(negated_inverse(1, 4), Some((3, 1)));
    }

    #[test]
    fn dihedral_arithmetic_matches_oracle() {
        let (d, si, sj) = edge(6);
        let o = Oracle::new(&d);
        let words = ["i", "j", "i j", "j i j", "i j i j i", "j i j i j i", "1"];
        for a in words {
            for b in words {
                let wa = Word::parse(a, &d).unwrap();
                let wb = Word::parse(b, &d).unwrap();
                let ea = Dihedral::from_word(&wa, si, sj, 6).unwrap();
                let eb = Dihedral::from_word(&wb, si, sj, 6).unwrap();
                let prod = ea.mul(eb);
                assert!(o.equal(&prod.to_word(si, sj), &wa.concat(&wb)).unwrap());
                assert!(o.equal(&ea.inverse().to_word(si, sj), &wa.inverse()).unwrap());
            }
        }
    }

    #[test]
    fn conjugation_is_independent_of_l() {
        for n in [4u32, 6, 8] {
            let (d, si, sj) = edge(n);
            let o = Oracle::new(&d);
            let sjw = Word::letter(sj);
            for k in coprime_residues(n) {
                let reference = XWord::new(si, sj, n, 1, k).word().conjugate(&sjw);
                let power = Word::alternating(si, sj, k as usize);
                for l in 1..=4 {
                    let conj = XWord::new(si, sj, n, l, k).word().conjugate(&sjw);
                    assert!(o.equal(&conj, &reference).unwrap());
                    assert!(o.equal(&Word::letter(si).concat(&conj), &power).unwrap());
                }
            }
        }
    }

    #[test]
    fn leading_letter_and_absorption_identities() {
        for n in [4u32, 6, 8] {
            let (d, si, sj) = edge(n);
            let o = Oracle::new(&d);
            let centralizer = [
                Word::empty(),
                Word::letter(sj),
                Word::alternating(si, sj, n as usize / 2 - 1).concat(&Word::letter(si)),
                Word::alternating(si, sj, n as usize / 2),
            ];
            for k in coprime_residues(n) {
                let x = |l| XWord::new(si, sj, n, l, k);
                // x_3(k) = s_i x_1(n-k) and x_4(k) = s_i x_2(n-k)
                for (l, lp) in [(3, 1), (4, 2)] {
                    let rhs = Word::letter(si).concat(&XWord::new(si, sj, n, lp, n - k).word());
                    assert!(o.equal(&x(l).word(), &rhs).unwrap());
                    assert_eq!(x(l).strip_leading(), Some(XWord::new(si, sj, n, lp, n - k)));
                }
                for l in 1..=4 {
                    for z in &centralizer {
                        let zd = Dihedral::from_word(z, si, sj, n).unwrap();
                        let y = x(l).absorb_right(zd).expect("absorbed");
                        assert_eq!(y.k, k);
                        assert!(o.equal(&x(l).word().concat(z), &y.word()).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn composition_and_inverse_are_exact() {
        for n in [4u32, 6, 8] {
            let (d, si, sj) = edge(n);
            let o = Oracle::new(&d);
            for k in coprime_residues(n) {
                for l in 1..=4 {
                    let x = XWord::new(si, sj, n, l, k);
                    let inv = x.inverse();
                    assert_eq!(x.compose(&inv), XWord::identity(si, sj, n));
                    for kp in coprime_residues(n) {
                        for lp in 1..=4 {
                            let outer = XWord::new(si, sj, n, lp, kp);
                            let c = x.compose(&outer);
                            assert_eq!(c.k, k * kp % n);
                            // γ'(x)·x' evaluated letterwise by the oracle.
                            let twisted: Word = Word::product(x.word().letters().iter().map(|&g| {
                                if g == si {
                                    Word::letter(si)
                                } else {
                                    outer.word().conjugate(&Word::letter(sj))
                                }
                            }).collect::<Vec<_>>().iter());
                            assert!(o.equal(&twisted.concat(&outer.word()), &c.word()).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn klein_table() {
        assert_eq!(klein(1, 3), 3);
        assert_eq!(klein(2, 3), 4);
        assert_eq!(klein(3, 4), 2);
        for l in 1..=4 {
            assert_eq!(klein(l, l), 1);
        }
    }

    /// The XOR rule with `kk' mod n` is exact when the carry `⌊kk'/n⌋` is
    /// even; an odd carry multiplies by the central element `(s_i s_j)^{n/2}`.
    #[test]
    fn klein_rule_up_to_central_carry() {
        for n in [4u32, 6, 8] {
            let (_, si, sj) = edge(n);
            for k in coprime_residues(n) {
                for kp in coprime_residues(n) {
                    let x = XWord::new(si, sj, n, 1, k);
                    let outer = XWord::new(si, sj, n, 1, kp);
                    let c = x.compose(&outer);
                    let carry_odd = (k * kp / n) % 2 == 1;
                    assert_eq!(c.l, if carry_odd { 4 } else { 1 }, "n={n} k={k} k'={kp}");
                }
            }
        }
    }
}
