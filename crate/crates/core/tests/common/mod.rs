//! Independent oracles used by the integration and acceptance tests. These
//! deliberately avoid the library's own computation paths: faces are
//! enumerated by exhaustive subsets, h-vectors by direct polynomial
//! expansion, cyclic facets by the evenness condition, shadows by compressed
//! monomial sets, and Hausdorff distances by quasi-random sampling.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;

use gstress::geometry::Polytope;

/// Face counts (f_{-1}, f_0, ...) by exhaustive subset enumeration.
pub fn brute_force_face_counts(facets: &[Vec<u32>]) -> Vec<u64> {
    let mut faces: BTreeSet<Vec<u32>> = BTreeSet::new();
    faces.insert(Vec::new());
    for facet in facets {
        let mut sorted = facet.clone();
        sorted.sort_unstable();
        sorted.dedup();
        let m = sorted.len();
        for mask in 1u64..(1 << m) {
            let sub: Vec<u32> = (0..m).filter(|i| mask & (1 << i) != 0).map(|i| sorted[i]).collect();
            faces.insert(sub);
        }
    }
    let dim = faces.iter().map(|f| f.len()).max().unwrap_or(0);
    let mut counts = vec![0u64; dim + 1];
    for f in faces {
        counts[f.len()] += 1;
    }
    counts
}

/// h-vector by expanding sum_j f_{j-1} x^j (1-x)^{d-j} coefficient-wise.
pub fn h_by_polynomial_expansion(f: &[u64]) -> Vec<BigInt> {
    let d = f.len() - 1;
    let mut acc = vec![BigInt::zero(); d + 1];
    for (j, &fj) in f.iter().enumerate() {
        // (1-x)^{d-j} coefficients.
        let e = d - j;
        let mut pow = vec![BigInt::zero(); e + 1];
        for (i, slot) in pow.iter_mut().enumerate() {
            let mut c = BigInt::from(1);
            for t in 0..i {
                c = c * BigInt::from((e - t) as i64) / BigInt::from((t + 1) as i64);
            }
            *slot = if i % 2 == 0 { c } else { -c };
        }
        for (i, c) in pow.into_iter().enumerate() {
            if j + i <= d {
                acc[j + i] += c * BigInt::from(fj);
            }
        }
    }
    acc
}

/// Facets of the cyclic polytope C(n, d) by the evenness condition: a
/// d-subset S is a facet iff any two elements outside S have an even number
/// of elements of S strictly between them.
pub fn gale_evenness_facets(n: usize, d: usize) -> Vec<Vec<usize>> {
    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        fn rec(start: usize, n: usize, k: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if acc.len() == k {
                out.push(acc.clone());
                return;
            }
            for i in start..n {
                acc.push(i);
                rec(i + 1, n, k, acc, out);
                acc.pop();
            }
        }
        let mut out = Vec::new();
        rec(0, n, k, &mut Vec::new(), &mut out);
        out
    }
    let mut facets = Vec::new();
    'cand: for s in subsets(n, d) {
        let in_s: Vec<bool> = {
            let mut v = vec![false; n];
            for &i in &s {
                v[i] = true;
            }
            v
        };
        let outside: Vec<usize> = (0..n).filter(|&i| !in_s[i]).collect();
        for (a, &i) in outside.iter().enumerate() {
            for &j in &outside[a + 1..] {
                let between = s.iter().filter(|&&k| i < k && k < j).count();
                if between % 2 != 0 {
                    continue 'cand;
                }
            }
        }
        facets.push(s);
    }
    facets
}

/// Brute-force Macaulay shadow: the number of distinct degree-(k-1) divisors
/// of the first n degree-k monomials in descending reverse-lexicographic
/// order (the compressed monomial set).
pub fn compressed_shadow(k: usize, n: usize) -> u64 {
    if n == 0 {
        return 0;
    }
    // Enough variables that at least n degree-k monomials exist.
    let mut t = 1usize;
    loop {
        let mut count = 1u64;
        for i in 0..k as u64 {
            count = count * (t as u64 + i) / (i + 1);
        }
        if count >= n as u64 {
            break;
        }
        t += 1;
    }
    // Exponent vectors over t variables summing to k.
    fn exponents(t: usize, k: usize) -> Vec<Vec<usize>> {
        fn rec(pos: usize, t: usize, left: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if pos == t {
                if left == 0 {
                    out.push(acc.clone());
                }
                return;
            }
            for e in 0..=left {
                acc.push(e);
                rec(pos + 1, t, left - e, acc, out);
                acc.pop();
            }
        }
        let mut out = Vec::new();
        rec(0, t, k, &mut Vec::new(), &mut out);
        out
    }
    let mut monomials = exponents(t, k);
    // Descending revlex: a > b iff the last nonzero entry of a - b is
    // negative.
    monomials.sort_by(|a, b| {
        for i in (0..a.len()).rev() {
            if a[i] != b[i] {
                return a[i].cmp(&b[i]);
            }
        }
        std::cmp::Ordering::Equal
    });
    let chosen = &monomials[..n];
    let mut divisors: BTreeSet<Vec<usize>> = BTreeSet::new();
    for m in chosen {
        for i in 0..m.len() {
            if m[i] > 0 {
                let mut div = m.clone();
                div[i] -= 1;
                divisors.insert(div);
            }
        }
    }
    divisors.len() as u64
}

/// Quasi-random points on S^{d-1}: Fibonacci lattice for d = 3, a Kronecker
/// sequence in Hopf coordinates for d = 4.
pub fn quasi_sphere_points(n: usize, d: usize) -> Vec<Vec<f64>> {
    match d {
        3 => {
            let golden = (1.0 + 5.0f64.sqrt()) / 2.0;
            (0..n)
                .map(|i| {
                    let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
                    let r = (1.0 - z * z).sqrt();
                    let phi = 2.0 * std::f64::consts::PI * (i as f64 / golden).fract();
                    vec![r * phi.cos(), r * phi.sin(), z]
                })
                .collect()
        }
        4 => {
            // R3 Kronecker sequence driving Hopf coordinates.
            let alphas = {
                // Plastic-number based low-discrepancy generators.
                let g = 1.2207440846057596f64;
                [1.0 / g, 1.0 / (g * g), 1.0 / (g * g * g)]
            };
            (0..n)
                .map(|i| {
                    let u: Vec<f64> =
                        alphas.iter().map(|a| ((i as f64 + 0.5) * a).fract()).collect();
                    let theta = u[2].sqrt().asin();
                    let (p1, p2) = (2.0 * std::f64::consts::PI * u[0], 2.0 * std::f64::consts::PI * u[1]);
                    vec![
                        theta.cos() * p1.cos(),
                        theta.cos() * p1.sin(),
                        theta.sin() * p2.cos(),
                        theta.sin() * p2.sin(),
                    ]
                })
                .collect()
        }
        _ => panic!("quasi-random sphere points implemented for d = 3, 4"),
    }
}

/// A cell grid over sphere samples supporting "best aligned sample to a
/// direction" queries.
pub struct SphereSampleGrid {
    d: usize,
    cell: f64,
    points: Vec<Vec<f64>>,
    grid: HashMap<Vec<i32>, Vec<usize>>,
}

impl SphereSampleGrid {
    pub fn new(points: Vec<Vec<f64>>, cell: f64) -> Self {
        let d = points[0].len();
        let mut grid: HashMap<Vec<i32>, Vec<usize>> = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            let key: Vec<i32> = p.iter().map(|&c| (c / cell).floor() as i32).collect();
            grid.entry(key).or_default().push(i);
        }
        SphereSampleGrid { d, cell, points, grid }
    }

    /// max over samples b of <u, b>, searching cells outward from u's cell.
    pub fn best_alignment(&self, u: &[f64]) -> f64 {
        let center: Vec<i32> = u.iter().map(|&c| (c / self.cell).floor() as i32).collect();
        for radius in 1..=4i32 {
            let mut best = f64::NEG_INFINITY;
            let mut offsets = vec![Vec::new()];
            for _ in 0..self.d {
                let mut next = Vec::new();
                for partial in offsets {
                    for delta in -radius..=radius {
                        let mut np: Vec<i32> = partial.clone();
                        np.push(delta);
                        next.push(np);
                    }
                }
                offsets = next;
            }
            for off in &offsets {
                let key: Vec<i32> = center.iter().zip(off).map(|(c, o)| c + o).collect();
                if let Some(ids) = self.grid.get(&key) {
                    for &i in ids {
                        let dot: f64 =
                            u.iter().zip(&self.points[i]).map(|(a, b)| a * b).sum();
                        best = best.max(dot);
                    }
                }
            }
            if best > f64::NEG_INFINITY {
                return best;
            }
        }
        f64::NEG_INFINITY
    }
}

/// Sampling estimator for the Hausdorff distance to the unit ball, via the
/// support-duality form d(b, P) = max_u (<u,b> - h_P(u)) evaluated over the
/// facet normals; always a lower bound on the true distance.
pub fn sampled_hausdorff_to_ball(p: &Polytope, grid: &SphereSampleGrid) -> f64 {
    let outward = p
        .vertices()
        .points()
        .iter()
        .map(|v| v.norm() - 1.0)
        .fold(0.0f64, f64::max);
    let mut inward = 0.0f64;
    for plane in p.planes() {
        let u: Vec<f64> = plane.normal.iter().copied().collect();
        let best = grid.best_alignment(&u);
        inward = inward.max(best - plane.offset);
    }
    inward.max(outward).max(0.0)
}
