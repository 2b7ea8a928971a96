//! A second route to the cocycle values: multiply truncated Laurent jets in the
//! local chart and read off the residue, without forming the integrand.

use num_traits::Zero;

use super::Cycle;
use crate::connection::ConnectionForm;
use crate::exactmath::{laurent_expand, ord_at, Gq, Mat, Point, RationalFunction};
use crate::laxalgebra::LaxElement;

/// Matrix jet `Σ_{k ≥ lo} c[k − lo]·t^k` in the local coordinate `t`.
struct Series {
    lo: i64,
    c: Vec<Mat>,
}

impl Series {
    fn expand(l: &LaxElement, p: &Point, lo: i64, hi: i64) -> Self {
        let c = if hi >= lo { l.jet(p, lo, hi) } else { Vec::new() };
        Self { lo, c }
    }

    fn get(&self, k: i64) -> Option<&Mat> {
        if k < self.lo {
            return None;
        }
        self.c.get((k - self.lo) as usize)
    }
}

/// `t`-coefficient of the `dz`-derivative: `(k+1)L_{k+1}` at a finite point,
/// `−(k−1)L_{k−1}` at `∞` where `d/dz = −w² d/dw`.
fn z_derivative(s: &Series, p: &Point, k: i64) -> Option<Mat> {
    let (src, f) = if p.is_infinite() { (k - 1, -(k - 1)) } else { (k + 1, k + 1) };
    s.get(src).map(|m| m.scale(&Gq::from_int(f)))
}

/// The order `t` whose coefficient in `f` gives `res_P(f dz)`, and its sign.
fn residue_slot(p: &Point) -> (i64, Gq) {
    if p.is_infinite() {
        (1, -Gq::from_int(1))
    } else {
        (-1, Gq::from_int(1))
    }
}

fn tr_mul(a: &Mat, b: &Mat) -> Gq {
    let n = a.rows();
    let mut acc = Gq::zero();
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (a.get(i, j), b.get(j, i));
            if !x.is_zero() && !y.is_zero() {
                acc += &(x * y);
            }
        }
    }
    acc
}

fn res_gamma1(omega: &ConnectionForm, p: &Point, l: &LaxElement, l2: &LaxElement) -> Gq {
    let (Some(a), Some(b)) = (l.ord_at(p), l2.ord_at(p)) else { return Gq::zero() };
    let (t, sign) = residue_slot(p);
    let w_ord = if omega.is_zero() { None } else { omega.matrix_part.ord_at(p) };
    let d_ord = if p.is_infinite() { b + 1 } else { b - 1 };
    let m_ord = w_ord.map_or(d_ord, |c| d_ord.min(c + b));
    let top = t - a;
    let l_s = Series::expand(l, p, a, t - m_ord);
    let l2_hi = w_ord.map_or(top + 1, |c| (top + 1).max(top - c));
    let l2_s = Series::expand(l2, p, b, l2_hi);
    let w_s = w_ord.map(|c| Series::expand(&omega.matrix_part, p, c, top - b));
    let mut acc = Gq::zero();
    for j in m_ord..=top {
        let Some(li) = l_s.get(t - j) else { continue };
        let mut mj = z_derivative(&l2_s, p, j).unwrap_or_else(|| Mat::zeros(l.size(), l.size()));
        if let (Some(ws), Some(c)) = (&w_s, w_ord) {
            for x in c..=j - b {
                if let (Some(wx), Some(ly)) = (ws.get(x), l2_s.get(j - x)) {
                    mj = &mj + &wx.commutator(ly);
                }
            }
        }
        acc += &tr_mul(li, &mj);
    }
    &acc * &sign
}

fn scalar_jet(f: &RationalFunction, p: &Point, lo: i64, hi: i64) -> Vec<Gq> {
    if hi < lo {
        return Vec::new();
    }
    let j = laurent_expand(f, p, lo, hi);
    (lo..=hi).map(|k| j.coeff(k)).collect()
}

fn res_gamma2(p: &Point, l: &LaxElement, l2: &LaxElement) -> Gq {
    let (f, g) = (l.trace(), l2.trace());
    let (Some(a), Some(b)) = (ord_at(&f, p), ord_at(&g, p)) else { return Gq::zero() };
    let (t, sign) = residue_slot(p);
    let d_ord = if p.is_infinite() { b + 1 } else { b - 1 };
    let fj = scalar_jet(&f, p, a, t - d_ord);
    let gj = scalar_jet(&g, p, b, t - a + 1);
    let mut acc = Gq::zero();
    for j in d_ord..=t - a {
        let i = t - j;
        let (src, k) = if p.is_infinite() { (j - 1, -(j - 1)) } else { (j + 1, j + 1) };
        if src < b || i < a {
            continue;
        }
        let (Some(x), Some(y)) = (fj.get((i - a) as usize), gj.get((src - b) as usize)) else { continue };
        acc += &(&(x * y) * &Gq::from_int(k));
    }
    &acc * &sign
}

/// `γ₁` over `c` computed from truncated jets at each point of the cycle.
pub fn gamma1_by_jets(omega: &ConnectionForm, c: &Cycle, l: &LaxElement, l2: &LaxElement) -> Gq {
    c.weights.iter().map(|(p, w)| &res_gamma1(omega, p, l, l2) * &Gq::from_int(*w)).sum()
}

/// `γ₂` over `c` computed from truncated jets of the traces.
pub fn gamma2_by_jets(c: &Cycle, l: &LaxElement, l2: &LaxElement) -> Gq {
    c.weights.iter().map(|(p, w)| &res_gamma2(p, l, l2) * &Gq::from_int(*w)).sum()
}
