//! f/h/g-vector transforms, Dehn-Sommerville checks, Macaulay binomial
//! representations, shadow functions, and the M-sequence predicate.
//!
//! All arithmetic in this module is exact (arbitrary-precision integers).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::complex::SimplicialComplex;

/// Face counts (f_{-1}, f_0, ..., f_{d-1}) of a (d-1)-dimensional complex,
/// indexed so that `f.entry(-1) == 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceVector {
    d: usize,
    counts: Vec<BigInt>,
}

impl FaceVector {
    /// Builds from the counts (f_{-1}, ..., f_{d-1}). Requires f_{-1} = 1 and
    /// non-negative entries.
    pub fn new(counts: Vec<BigInt>) -> Self {
        assert!(!counts.is_empty(), "face vector needs at least f_{{-1}}");
        assert!(counts[0].is_one(), "f_{{-1}} must be 1");
        assert!(counts.iter().all(|c| !c.is_negative()), "face counts must be non-negative");
        FaceVector { d: counts.len() - 1, counts }
    }

    pub fn from_u64(counts: &[u64]) -> Self {
        Self::new(counts.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn of_complex(k: &SimplicialComplex) -> Self {
        Self::from_u64(k.face_counts())
    }

    /// Dimension of the polytope: the complex has dimension d-1.
    pub fn d(&self) -> usize {
        self.d
    }

    /// f_i for i in -1..=d-1.
    pub fn entry(&self, i: i64) -> &BigInt {
        &self.counts[(i + 1) as usize]
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.counts
    }
}

/// h-vector (h_0, ..., h_d).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HVector {
    entries: Vec<BigInt>,
}

impl HVector {
    pub fn new(entries: Vec<BigInt>) -> Self {
        assert!(!entries.is_empty());
        HVector { entries }
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        Self::new(entries.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn d(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }
}

/// g-vector (g_0, ..., g_{floor(d/2)}).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GVector {
    entries: Vec<BigInt>,
}

impl GVector {
    pub fn new(entries: Vec<BigInt>) -> Self {
        assert!(!entries.is_empty());
        GVector { entries }
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        Self::new(entries.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    /// g_k; zero above the stored range.
    pub fn entry(&self, k: usize) -> BigInt {
        self.entries.get(k).cloned().unwrap_or_else(BigInt::zero)
    }
}

/// Exact binomial coefficient with BigInt arguments, zero for n < k.
pub fn binomial(n: &BigInt, k: u64) -> BigInt {
    if n.is_negative() {
        return BigInt::zero();
    }
    if *n < BigInt::from(k) {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= n - BigInt::from(i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

pub fn binomial_u64(n: u64, k: u64) -> BigInt {
    binomial(&BigInt::from(n), k)
}

/// h_i = sum_{j=0..i} (-1)^{i-j} C(d-j, i-j) f_{j-1}.
pub fn h_from_f(f: &FaceVector) -> HVector {
    let d = f.d() as i64;
    let mut h = Vec::with_capacity(f.d() + 1);
    for i in 0..=d {
        let mut acc = BigInt::zero();
        for j in 0..=i {
            let c = binomial(&BigInt::from(d - j), (i - j) as u64);
            let term = c * f.entry(j - 1);
            if (i - j) % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        h.push(acc);
    }
    HVector::new(h)
}

/// Inverse transform: f_{j-1} = sum_{i=0..j} C(d-i, j-i) h_i.
pub fn f_from_h(h: &HVector) -> FaceVector {
    let d = h.d() as i64;
    let mut f = Vec::with_capacity(h.d() + 1);
    for j in 0..=d {
        let mut acc = BigInt::zero();
        for i in 0..=j {
            acc += binomial(&BigInt::from(d - i), (j - i) as u64) * &h.entries()[i as usize];
        }
        f.push(acc);
    }
    FaceVector::new(f)
}

/// g_0 = h_0, g_i = h_i - h_{i-1} up to floor(d/2).
pub fn g_from_h(h: &HVector) -> GVector {
    let top = h.d() / 2;
    let mut g = vec![h.entries()[0].clone()];
    for i in 1..=top {
        g.push(&h.entries()[i] - &h.entries()[i - 1]);
    }
    GVector::new(g)
}

/// Dehn-Sommerville: h_i = h_{d-i} for all i.
pub fn check_dehn_sommerville(h: &HVector) -> bool {
    let d = h.d();
    (0..=d / 2).all(|i| h.entries()[i] == h.entries()[d - i])
}

/// One term C(a, j) of a Macaulay representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MacaulayTerm {
    pub a: BigInt,
    pub j: u64,
}

/// The unique greedy k-th Macaulay representation
/// n = C(a_k, k) + C(a_{k-1}, k-1) + ... + C(a_i, i) with
/// a_k > a_{k-1} > ... > a_i >= i >= 1.
pub fn macaulay_rep(n: &BigInt, k: u64) -> Vec<MacaulayTerm> {
    assert!(k >= 1, "macaulay_rep requires k >= 1");
    assert!(n.is_positive(), "macaulay_rep requires n >= 1");
    let mut terms = Vec::new();
    let mut rest = n.clone();
    let mut j = k;
    while rest.is_positive() && j >= 1 {
        // Largest a with C(a, j) <= rest, found by doubling then bisection.
        let mut lo = BigInt::from(j);
        let mut hi = lo.clone() + 1u32;
        while binomial(&hi, j) <= rest {
            hi = &hi * 2u32;
        }
        while &hi - &lo > BigInt::one() {
            let mid: BigInt = (&lo + &hi) / 2u32;
            if binomial(&mid, j) <= rest {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        rest -= binomial(&lo, j);
        terms.push(MacaulayTerm { a: lo, j });
        j -= 1;
    }
    debug_assert!(rest.is_zero(), "greedy Macaulay representation must be exact");
    terms
}

/// Reconstructs the integer from a representation (test hook).
pub fn macaulay_value(terms: &[MacaulayTerm]) -> BigInt {
    terms.iter().map(|t| binomial(&t.a, t.j)).sum()
}

/// Macaulay shadow function: with n = sum C(a_j, j) in its k-th
/// representation, shadow(k, n) = sum C(a_j - 1, j - 1). shadow(k, 0) = 0.
pub fn shadow(k: u64, n: &BigInt) -> BigInt {
    assert!(k >= 1, "shadow requires k >= 1");
    if n.is_zero() {
        return BigInt::zero();
    }
    macaulay_rep(n, k)
        .iter()
        .map(|t| binomial(&(&t.a - 1u32), t.j - 1))
        .sum()
}

/// Macaulay pseudopower n^<k>: with n = sum C(a_j, j) in its k-th
/// representation, n^<k> = sum C(a_j + 1, j + 1). 0^<k> = 0.
pub fn pseudopower(n: &BigInt, k: u64) -> BigInt {
    assert!(k >= 1, "pseudopower requires k >= 1");
    if n.is_zero() {
        return BigInt::zero();
    }
    macaulay_rep(n, k)
        .iter()
        .map(|t| binomial(&(&t.a + 1u32), t.j + 1))
        .sum()
}

/// M-sequence predicate in the shadow form: g_0 = 1, all entries
/// non-negative, and shadow(k+1, g_{k+1}) <= g_k for each consecutive pair.
pub fn is_m_sequence(g: &GVector) -> bool {
    let entries = g.entries();
    if !entries[0].is_one() {
        return false;
    }
    if entries.iter().any(|e| e.is_negative()) {
        return false;
    }
    for k in 0..entries.len() - 1 {
        if shadow(k as u64 + 1, &entries[k + 1]) > entries[k] {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fv(counts: &[u64]) -> FaceVector {
        FaceVector::from_u64(counts)
    }

    #[test]
    fn octahedron_h_vector() {
        let h = h_from_f(&fv(&[1, 6, 12, 8]));
        assert_eq!(h, HVector::from_i64(&[1, 3, 3, 1]));
        assert_eq!(g_from_h(&h), GVector::from_i64(&[1, 2]));
    }

    #[test]
    fn cross_4_h_vector() {
        let h = h_from_f(&fv(&[1, 8, 24, 32, 16]));
        assert_eq!(h, HVector::from_i64(&[1, 4, 6, 4, 1]));
        assert_eq!(g_from_h(&h), GVector::from_i64(&[1, 3, 2]));
    }

    #[test]
    fn simplex_boundaries_have_all_ones_h() {
        for d in 1..=6u64 {
            let counts: Vec<u64> = (0..=d).map(|j| binomial_u64(d + 1, j).try_into().unwrap()).collect();
            let h = h_from_f(&fv(&counts));
            assert!(h.entries().iter().all(|e| e.is_one()), "d={d}: {h:?}");
            let g = g_from_h(&h);
            assert!(g.entries()[0].is_one());
            assert!(g.entries()[1..].iter().all(|e| e.is_zero()));
        }
    }

    #[test]
    fn f_h_round_trip() {
        for counts in [vec![1u64, 6, 12, 8], vec![1, 8, 24, 32, 16], vec![1, 8, 28, 40, 20]] {
            let f = fv(&counts);
            assert_eq!(f_from_h(&h_from_f(&f)), f);
        }
    }

    #[test]
    fn dehn_sommerville() {
        assert!(check_dehn_sommerville(&HVector::from_i64(&[1, 4, 6, 4, 1])));
        assert!(!check_dehn_sommerville(&HVector::from_i64(&[1, 2, 3, 1])));
    }

    #[test]
    fn macaulay_representations() {
        let rep = macaulay_rep(&BigInt::from(10), 2);
        assert_eq!(rep, vec![MacaulayTerm { a: BigInt::from(5), j: 2 }]);

        let rep = macaulay_rep(&BigInt::from(11), 2);
        assert_eq!(
            rep,
            vec![
                MacaulayTerm { a: BigInt::from(5), j: 2 },
                MacaulayTerm { a: BigInt::from(1), j: 1 },
            ]
        );

        for k in 1..=5u64 {
            let rep = macaulay_rep(&BigInt::one(), k);
            assert_eq!(rep, vec![MacaulayTerm { a: BigInt::from(k), j: k }]);
        }

        // Reconstruction and strict decrease of the upper indices.
        for n in 1..=200i64 {
            for k in 1..=4u64 {
                let rep = macaulay_rep(&BigInt::from(n), k);
                assert_eq!(macaulay_value(&rep), BigInt::from(n));
                for w in rep.windows(2) {
                    assert!(w[0].a > w[1].a);
                    assert_eq!(w[0].j, w[1].j + 1);
                }
                assert!(rep.last().unwrap().a >= BigInt::from(rep.last().unwrap().j));
                assert!(rep.last().unwrap().j >= 1);
            }
        }
    }

    #[test]
    fn shadow_values() {
        assert_eq!(shadow(2, &BigInt::from(10)), BigInt::from(4));
        assert_eq!(shadow(3, &BigInt::from(10)), BigInt::from(6));
        assert_eq!(shadow(2, &BigInt::from(11)), BigInt::from(5));
        assert_eq!(shadow(1, &BigInt::zero()), BigInt::zero());
        for n in 1..=50 {
            assert_eq!(shadow(1, &BigInt::from(n)), BigInt::one());
        }
        // Monotone non-decreasing in n.
        for k in 1..=4u64 {
            let mut prev = BigInt::zero();
            for n in 0..=100 {
                let s = shadow(k, &BigInt::from(n));
                assert!(s >= prev);
                prev = s;
            }
        }
    }

    #[test]
    fn m_sequence_predicate() {
        assert!(is_m_sequence(&GVector::from_i64(&[1, 3, 6])));
        assert!(!is_m_sequence(&GVector::from_i64(&[1, 0, 1])));
        assert!(is_m_sequence(&GVector::from_i64(&[1, 5, 0])));
        assert!(!is_m_sequence(&GVector::from_i64(&[2, 1])));
        assert!(!is_m_sequence(&GVector::from_i64(&[1, -1])));
        assert!(is_m_sequence(&GVector::from_i64(&[1])));
    }
}
