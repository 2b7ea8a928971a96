//! Chevalley bases of sl(n), so(n) and sp(2n).
//!
//! Roots are recorded as integer weight vectors against the diagonal Cartan
//! subalgebra of the construction form. A root is positive when its first
//! nonzero coordinate is positive; simple roots are positive roots that are not
//! sums of two positive roots.
//!
//! so(n) is built in the split form `X^t J + J X = 0` with `J` the anti-diagonal
//! ones matrix and then conjugated by `T` with `T^t T = J` into the skew form
//! `X^t = −X`. On each pair of coordinates `(k, n−1−k)` the change of basis is
//! `T = [[1/2, 1], [−i/2, i]]`; a middle coordinate (odd `n`) is kept.

use num_traits::{One, Zero};
use serde::Serialize;

use super::super::laxalgebra::{AlgebraSpec, Family};
use crate::error::{MathError, Result};
use crate::exactmath::{Gq, Mat};

pub type Root = Vec<i64>;

#[derive(Clone, Debug, Serialize)]
pub struct ChevalleyBasis {
    pub positive_roots: Vec<Root>,
    pub simple_roots: Vec<Root>,
    /// `E^α` for positive roots, in `positive_roots` order.
    pub e_pos: Vec<Mat>,
    /// `E^{−α}` for positive roots, in `positive_roots` order.
    pub e_neg: Vec<Mat>,
    /// `H^α` for every positive root.
    pub h_root: Vec<Mat>,
    /// `H^i = H^{α_i}` for the simple roots.
    pub h_simple: Vec<Mat>,
}

impl ChevalleyBasis {
    /// The basis as a flat list: `E^{α}` (positive), `E^{−α}`, then `H^i`.
    pub fn elements(&self) -> Vec<Mat> {
        self.e_pos.iter().chain(&self.e_neg).chain(&self.h_simple).cloned().collect()
    }

    pub fn dim(&self) -> usize {
        2 * self.e_pos.len() + self.h_simple.len()
    }

    /// Index of a root (positive or negative) among all roots, with its sign.
    fn root_index(&self, r: &[i64]) -> Option<(usize, bool)> {
        if let Some(i) = self.positive_roots.iter().position(|p| p == r) {
            return Some((i, true));
        }
        let neg: Root = r.iter().map(|x| -x).collect();
        self.positive_roots.iter().position(|p| *p == neg).map(|i| (i, false))
    }

    fn root_vector(&self, r: &[i64]) -> Option<&Mat> {
        self.root_index(r).map(|(i, pos)| if pos { &self.e_pos[i] } else { &self.e_neg[i] })
    }

    fn coroot(&self, r: &[i64]) -> Option<Mat> {
        self.root_index(r).map(|(i, pos)| if pos { self.h_root[i].clone() } else { -&self.h_root[i] })
    }

    fn all_roots(&self) -> Vec<Root> {
        self.positive_roots
            .iter()
            .cloned()
            .chain(self.positive_roots.iter().map(|r| r.iter().map(|x| -x).collect()))
            .collect()
    }

    /// Checks `[E^α, E^{−α}] = H^α`, `[H^α, E^β] = ⟨β, α^∨⟩E^β` and
    /// `[E^α, E^β] = ±(r+1)E^{α+β}` over all roots. Returns the first failure.
    pub fn verify(&self) -> std::result::Result<(), String> {
        let roots = self.all_roots();
        for a in &roots {
            let ea = self.root_vector(a).unwrap();
            let neg: Root = a.iter().map(|x| -x).collect();
            let ha = self.coroot(a).unwrap();
            if ea.commutator(self.root_vector(&neg).unwrap()) != ha {
                return Err(format!("[E^{a:?}, E^-{a:?}] != H^{a:?}"));
            }
            for b in &roots {
                let eb = self.root_vector(b).unwrap();
                let hb = ha.commutator(eb);
                // ⟨β, α^∨⟩ read off from the bracket itself must be the root-string integer.
                let pairing = if a == b {
                    2
                } else if *b == neg {
                    -2
                } else {
                    string_bottom(&roots, a, b) - string_top(&roots, a, b)
                };
                if hb != eb.scale(&Gq::from_int(pairing)) {
                    return Err(format!("[H^{a:?}, E^{b:?}] != {pairing} E^{b:?}"));
                }
                if a == b || *b == neg {
                    continue;
                }
                let sum: Root = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let br = ea.commutator(eb);
                match self.root_vector(&sum) {
                    None => {
                        if !br.is_zero() {
                            return Err(format!("[E^{a:?}, E^{b:?}] should vanish"));
                        }
                    }
                    Some(es) => {
                        let r = string_bottom(&roots, a, b);
                        let plus = es.scale(&Gq::from_int(r + 1));
                        if br != plus && br != -&plus {
                            return Err(format!("[E^{a:?}, E^{b:?}] != ±{} E^{sum:?}", r + 1));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Largest `r ≥ 0` with `β − rα` a root (or `β` itself).
fn string_bottom(roots: &[Root], a: &[i64], b: &[i64]) -> i64 {
    let mut r = 0;
    loop {
        let c: Root = b.iter().zip(a).map(|(y, x)| y - (r + 1) * x).collect();
        if roots.contains(&c) {
            r += 1;
        } else {
            return r;
        }
    }
}

/// Largest `q ≥ 0` with `β + qα` a root.
fn string_top(roots: &[Root], a: &[i64], b: &[i64]) -> i64 {
    let mut q = 0;
    loop {
        let c: Root = b.iter().zip(a).map(|(y, x)| y + (q + 1) * x).collect();
        if roots.contains(&c) {
            q += 1;
        } else {
            return q;
        }
    }
}

fn is_positive(r: &[i64]) -> bool {
    r.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
}

/// Weight of `x` against the diagonal Cartan elements `hs`, if `x` is a joint eigenvector.
fn weight(hs: &[Mat], x: &Mat) -> Option<Root> {
    hs.iter()
        .map(|h| {
            let b = h.commutator(x);
            let (i, j) = (0..x.rows())
                .flat_map(|i| (0..x.cols()).map(move |j| (i, j)))
                .find(|&(i, j)| !x.get(i, j).is_zero())?;
            let lam = b.get(i, j) / x.get(i, j);
            if b != x.scale(&lam) {
                return None;
            }
            lam.to_integer().and_then(|v| i64::try_from(v).ok())
        })
        .collect()
}

/// Builds the basis from diagonal Cartan generators and candidate positive root
/// vectors. Only the simple root vectors are kept; the others are generated by
/// `E^{α+α_i} = [E^{α_i}, E^α]/(r+1)`. Negative root vectors start from
/// transposes and are rescaled so that `H^α = [E^α, E^{−α}]` has `[H^α, E^α] = 2E^α`.
fn assemble(cartan: Vec<Mat>, pos: Vec<Mat>) -> ChevalleyBasis {
    let tagged: Vec<(Root, Mat)> = pos
        .into_iter()
        .map(|e| (weight(&cartan, &e).expect("root vector"), e))
        .collect();
    assert!(tagged.iter().all(|(r, _)| is_positive(r)));
    let roots: Vec<Root> = tagged.iter().map(|(r, _)| r.clone()).collect();
    let diff = |a: &Root, b: &Root| -> Root { a.iter().zip(b).map(|(x, y)| x - y).collect() };
    let simple_roots: Vec<Root> = roots
        .iter()
        .filter(|r| !roots.iter().any(|a| roots.contains(&diff(r, a))))
        .cloned()
        .collect();
    // Height: number of simple roots in a chain down to a simple root.
    let mut height: Vec<Option<usize>> = roots.iter().map(|r| simple_roots.contains(r).then_some(1)).collect();
    while height.iter().any(|h| h.is_none()) {
        for k in 0..roots.len() {
            if height[k].is_some() {
                continue;
            }
            for s in &simple_roots {
                let d = diff(&roots[k], s);
                if let Some(j) = roots.iter().position(|r| *r == d) {
                    if let Some(h) = height[j] {
                        height[k] = Some(h + 1);
                        break;
                    }
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..roots.len()).collect();
    order.sort_by(|&a, &b| (height[a], &roots[b]).cmp(&(height[b], &roots[a])));
    let positive_roots: Vec<Root> = order.iter().map(|&k| roots[k].clone()).collect();

    let all: Vec<Root> = positive_roots
        .iter()
        .cloned()
        .chain(positive_roots.iter().map(|r| r.iter().map(|x| -x).collect()))
        .collect();
    let mut e_pos: Vec<Mat> = Vec::new();
    for (k, r) in positive_roots.iter().enumerate() {
        if simple_roots.contains(r) {
            e_pos.push(tagged.iter().find(|(w, _)| w == r).unwrap().1.clone());
            continue;
        }
        let (si, base) = simple_roots
            .iter()
            .find_map(|s| {
                let d = diff(r, s);
                positive_roots[..k].iter().position(|p| *p == d).map(|j| (s, j))
            })
            .expect("lower root in chain");
        let se = &e_pos[positive_roots.iter().position(|p| p == si).unwrap()];
        let rr = string_bottom(&all, si, &positive_roots[base]);
        e_pos.push(se.commutator(&e_pos[base]).scale(&Gq::from_frac(1, rr + 1)));
    }

    let mut e_neg = Vec::new();
    let mut h_root = Vec::new();
    for e in &e_pos {
        let f0 = e.transpose();
        let h0 = e.commutator(&f0);
        let probe = h0.commutator(e);
        let (i, j) = (0..e.rows())
            .flat_map(|i| (0..e.cols()).map(move |j| (i, j)))
            .find(|&(i, j)| !e.get(i, j).is_zero())
            .unwrap();
        let lam = probe.get(i, j) / e.get(i, j);
        let c = &Gq::from_int(2) / &lam;
        e_neg.push(f0.scale(&c));
        h_root.push(h0.scale(&c));
    }
    let simple_roots: Vec<Root> = positive_roots.iter().filter(|r| simple_roots.contains(r)).cloned().collect();
    let h_simple = simple_roots
        .iter()
        .map(|s| h_root[positive_roots.iter().position(|p| p == s).unwrap()].clone())
        .collect();
    ChevalleyBasis { positive_roots, simple_roots, e_pos, e_neg, h_root, h_simple }
}

fn sl_basis(n: usize) -> ChevalleyBasis {
    let cartan: Vec<Mat> = (0..n).map(|k| Mat::unit(n, k, k)).collect();
    let pos = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| Mat::unit(n, i, j)))
        .collect();
    assemble(cartan, pos)
}

fn sp_basis(n: usize) -> ChevalleyBasis {
    let m = 2 * n;
    let cartan: Vec<Mat> = (0..n).map(|k| &Mat::unit(m, k, k) - &Mat::unit(m, n + k, n + k)).collect();
    let mut pos = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i < j {
                pos.push(&Mat::unit(m, i, j) - &Mat::unit(m, n + j, n + i));
                pos.push(&Mat::unit(m, i, n + j) + &Mat::unit(m, j, n + i));
            }
        }
        pos.push(Mat::unit(m, i, n + i));
    }
    assemble(cartan, pos)
}

fn so_split_basis(n: usize) -> ChevalleyBasis {
    let l = n / 2;
    let bar = |k: usize| n - 1 - k;
    let f = |i: usize, j: usize| &Mat::unit(n, i, j) - &Mat::unit(n, bar(j), bar(i));
    let cartan: Vec<Mat> = (0..l).map(|k| f(k, k)).collect();
    let mut pos = Vec::new();
    for a in 0..l {
        for b in a + 1..l {
            pos.push(f(a, b));
            pos.push(f(a, bar(b)));
        }
        if n % 2 == 1 {
            pos.push(f(a, l));
        }
    }
    assemble(cartan, pos)
}

/// `T` with `T^t T = J` (anti-diagonal ones), mapping split-form coordinates to standard ones.
pub fn so_change_of_basis(n: usize) -> Mat {
    let mut t = Mat::zeros(n, n);
    let half = Gq::from_frac(1, 2);
    for k in 0..n / 2 {
        let kb = n - 1 - k;
        t.set(k, k, half.clone());
        t.set(k, kb, Gq::one());
        t.set(kb, k, -&(&half * &Gq::i()));
        t.set(kb, kb, Gq::i());
    }
    if n % 2 == 1 {
        t.set(n / 2, n / 2, Gq::one());
    }
    t
}

fn conjugate(basis: ChevalleyBasis, t: &Mat) -> ChevalleyBasis {
    let ti = t.inverse().expect("invertible change of basis");
    let c = |m: &Mat| &(t * m) * &ti;
    ChevalleyBasis {
        e_pos: basis.e_pos.iter().map(c).collect(),
        e_neg: basis.e_neg.iter().map(c).collect(),
        h_root: basis.h_root.iter().map(c).collect(),
        h_simple: basis.h_simple.iter().map(c).collect(),
        ..basis
    }
}

/// The Chevalley basis of a simple family, in the matrix realization used by
/// [`AlgebraSpec`]. For sp with a custom `σ` the standard basis is conjugated by
/// a symplectic change of coordinates.
pub fn chevalley_basis(spec: &AlgebraSpec) -> Result<ChevalleyBasis> {
    match spec.family {
        Family::Sl if spec.n >= 2 => Ok(sl_basis(spec.n)),
        Family::Sp if spec.n >= 1 => {
            let b = sp_basis(spec.n);
            match spec.symplectic_change() {
                None => Ok(b),
                Some(t) => Ok(conjugate(b, &t)),
            }
        }
        Family::So if spec.n >= 3 => Ok(conjugate(so_split_basis(spec.n), &so_change_of_basis(spec.n))),
        _ => Err(MathError::Family(format!("{:?}({}) has no Chevalley basis here", spec.family, spec.n))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(family: Family, n: usize) -> AlgebraSpec {
        AlgebraSpec::new(family, n)
    }

    #[test]
    fn sl2_is_efh() {
        let b = chevalley_basis(&spec(Family::Sl, 2)).unwrap();
        assert_eq!(b.e_pos, vec![Mat::from_ints(&[&[0, 1], &[0, 0]])]);
        assert_eq!(b.e_neg, vec![Mat::from_ints(&[&[0, 0], &[1, 0]])]);
        assert_eq!(b.h_simple, vec![Mat::from_ints(&[&[1, 0], &[0, -1]])]);
        b.verify().unwrap();
    }

    #[test]
    fn classical_dimensions_and_relations() {
        for (f, n, dim, rank) in [
            (Family::Sl, 3, 8, 2),
            (Family::Sl, 4, 15, 3),
            (Family::Sp, 1, 3, 1),
            (Family::Sp, 2, 10, 2),
            (Family::Sp, 3, 21, 3),
            (Family::So, 3, 3, 1),
            (Family::So, 4, 6, 2),
            (Family::So, 5, 10, 2),
            (Family::So, 6, 15, 3),
        ] {
            let s = spec(f, n);
            let b = chevalley_basis(&s).unwrap();
            assert_eq!(b.dim(), dim, "{f:?}({n})");
            assert_eq!(b.h_simple.len(), rank, "{f:?}({n})");
            b.verify().unwrap_or_else(|e| panic!("{f:?}({n}): {e}"));
            for x in b.elements() {
                assert!(s.contains(&x), "{f:?}({n}) element outside algebra");
            }
        }
    }

    #[test]
    fn so_change_of_basis_is_isometry() {
        for n in 3..=6 {
            let t = so_change_of_basis(n);
            let mut j = Mat::zeros(n, n);
            for k in 0..n {
                j.set(k, n - 1 - k, Gq::one());
            }
            assert_eq!(&t.transpose() * &t, j);
        }
    }
}
