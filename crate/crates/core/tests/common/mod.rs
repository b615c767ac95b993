//! Numeric helpers: commutative evaluation of polynomials at s = 1 and a
//! damped Gauss-Newton solver for commutative points of a presentation.
#![allow(dead_code)]

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cqgalg::freestar::{Gen, NCPoly};
use cqgalg::CQGPresentation;

pub type Point = BTreeMap<Gen, Complex64>;

fn letter_value(pt: &Point, g: Gen) -> Complex64 {
    if let Some(v) = pt.get(&g) {
        return *v;
    }
    if let Some(v) = pt.get(&g.star()) {
        return v.conj();
    }
    panic!("no value for {}", g);
}

/// Commutative value of `p` at `s = 1`; a missing base letter panics.
pub fn eval(p: &NCPoly, pt: &Point) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (w, c) in p.terms() {
        let (re, im) = c.eval_f64(1.0);
        let mut t = Complex64::new(re, im);
        for g in w.gens() {
            t *= letter_value(pt, *g);
        }
        acc += t;
    }
    acc
}

pub fn max_residual(rels: impl IntoIterator<Item = NCPoly>, pt: &Point) -> f64 {
    rels.into_iter().map(|r| eval(&r, pt).norm()).fold(0.0, f64::max)
}

/// The fundamental blocks evaluated at a point.
pub fn blocks_at(pres: &CQGPresentation, pt: &Point) -> Vec<DMatrix<Complex64>> {
    pres.blocks()
        .iter()
        .map(|b| {
            let m = &b.matrix;
            DMatrix::from_fn(m.rows(), m.cols(), |i, j| eval(&m.get(i, j), pt))
        })
        .collect()
}

/// Random commutative solutions of the relations, found by damped
/// Gauss-Newton from random starts. Returns only converged points.
pub fn sample_points(pres: &CQGPresentation, count: usize, seed: u64) -> Vec<Point> {
    let gens: Vec<Gen> = pres.generators().into_iter().collect();
    let rels: Vec<NCPoly> = pres.relations().iter().cloned().collect();
    let dim: usize = gens.iter().map(|g| if g.is_self_adjoint() { 1 } else { 2 }).sum();
    let to_point = |x: &DVector<f64>| -> Point {
        let mut pt = Point::new();
        let mut k = 0;
        for g in &gens {
            if g.is_self_adjoint() {
                pt.insert(*g, Complex64::new(x[k], 0.0));
                k += 1;
            } else {
                pt.insert(*g, Complex64::new(x[k], x[k + 1]));
                k += 2;
            }
        }
        pt
    };
    let residual = |x: &DVector<f64>| -> DVector<f64> {
        let pt = to_point(x);
        let mut out = Vec::with_capacity(2 * rels.len());
        for r in &rels {
            let v = eval(r, &pt);
            out.push(v.re);
            out.push(v.im);
        }
        DVector::from_vec(out)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found = Vec::new();
    let mut attempts = 0;
    while found.len() < count && attempts < 20 * count {
        attempts += 1;
        let mut x = DVector::from_fn(dim, |_, _| rng.gen_range(-1.0..1.0));
        let mut lambda = 1e-3;
        let mut f = residual(&x);
        for _ in 0..200 {
            if f.norm() < 1e-13 {
                break;
            }
            let h = 1e-7;
            let mut jac = DMatrix::zeros(f.len(), dim);
            for c in 0..dim {
                let mut xp = x.clone();
                xp[c] += h;
                let mut xm = x.clone();
                xm[c] -= h;
                jac.set_column(c, &((residual(&xp) - residual(&xm)) / (2.0 * h)));
            }
            let jt = jac.transpose();
            let a = &jt * &jac + DMatrix::identity(dim, dim) * lambda;
            let Some(step) = a.lu().solve(&(&jt * &f)) else { break };
            let xn = &x - step;
            let fnew = residual(&xn);
            if fnew.norm() < f.norm() {
                x = xn;
                f = fnew;
                lambda = (lambda * 0.3).max(1e-12);
            } else {
                lambda *= 10.0;
            }
        }
        if f.norm() < 1e-11 {
            found.push(to_point(&x));
        }
    }
    found
}
