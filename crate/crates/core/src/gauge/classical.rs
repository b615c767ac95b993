//! Floating-point check of the classical gauge group: which unitaries `u` of
//! the real algebra satisfy `u J u J⁻¹ = 1`. Evaluated at `s = 1`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{FiniteSpectralTriple, KernelClass, SparseMatrix};
use crate::cqg::CQGPresentation;
use crate::freestar::{Gen, NCPoly};
use crate::matrep::GenMatrix;
use crate::error::{Error, Result};
use crate::fdalg::complexify;
use crate::scalars::{Scalar, ScalarMatrix};

type CMat = DMatrix<Complex64>;

/// Tolerance for "equals the identity" and for classifying samples.
pub const TOLERANCE: f64 = 1e-9;

fn num(c: &Scalar) -> Complex64 {
    let (re, im) = c.eval_f64(1.0);
    Complex64::new(re, im)
}

fn dense(m: &SparseMatrix) -> CMat {
    let mut out = CMat::zeros(m.n(), m.n());
    for (i, j, c) in m.entries() {
        out[(i, j)] = num(c);
    }
    out
}

fn dense_scalar(m: &ScalarMatrix) -> CMat {
    CMat::from_fn(m.rows(), m.cols(), |i, j| num(m.get(i, j)))
}

fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Numeric form of a triple: the representation, `σ`, and `J a J⁻¹`.
struct Numeric {
    sizes: Vec<usize>,
    pi: Vec<Vec<CMat>>,
    perm: Vec<usize>,
    conjugators: Vec<CMat>,
    j0: CMat,
    j0bar: CMat,
    eps: f64,
    dim: usize,
}

type Element = Vec<CMat>;

impl Numeric {
    fn new(t: &FiniteSpectralTriple) -> Numeric {
        let (alg, sigma) = complexify(t.spec());
        let sizes = alg.sizes();
        let pi = sizes
            .iter()
            .enumerate()
            .map(|(b, &n)| {
                (0..n * n).map(|k| dense(&t.pi(b, k / n, k % n))).collect()
            })
            .collect();
        let j0 = dense(t.j0());
        Numeric {
            sizes,
            pi,
            perm: sigma.perm.clone(),
            conjugators: sigma.conjugators.iter().map(dense_scalar).collect(),
            j0bar: j0.map(|c| c.conj()),
            j0,
            eps: t.epsilon() as f64,
            dim: t.dim(),
        }
    }

    fn sigma(&self, x: &Element) -> Element {
        let mut out: Element = self.sizes.iter().map(|&n| CMat::zeros(n, n)).collect();
        for (b, m) in x.iter().enumerate() {
            let k = &self.conjugators[b];
            out[self.perm[b]] = k * m.map(|c| c.conj()) * k.adjoint();
        }
        out
    }

    /// Projection onto the real form: `(x + σ(x)) / 2`.
    fn real_part(&self, x: &Element) -> Element {
        let s = self.sigma(x);
        x.iter().zip(&s).map(|(a, b)| (a + b) * Complex64::new(0.5, 0.0)).collect()
    }

    fn rep(&self, x: &Element) -> CMat {
        let mut out = CMat::zeros(self.dim, self.dim);
        for (b, m) in x.iter().enumerate() {
            let n = self.sizes[b];
            for i in 0..n {
                for j in 0..n {
                    if m[(i, j)] != Complex64::new(0.0, 0.0) {
                        out += &self.pi[b][i * n + j] * m[(i, j)];
                    }
                }
            }
        }
        out
    }

    fn opposite(&self, a: &CMat) -> CMat {
        &self.j0 * a.map(|c| c.conj()) * &self.j0bar * Complex64::new(self.eps, 0.0)
    }

    /// `π(u) J π(u) J⁻¹`.
    fn gauge(&self, u: &Element) -> CMat {
        let p = self.rep(u);
        let q = self.opposite(&p);
        p * q
    }

    fn random_antihermitian(&self, rng: &mut ChaCha8Rng) -> Element {
        self.sizes
            .iter()
            .map(|&n| {
                let y = CMat::from_fn(n, n, |_, _| {
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                });
                (&y - y.adjoint()) * Complex64::new(0.5, 0.0)
            })
            .collect()
    }

    fn random_central(&self, rng: &mut ChaCha8Rng) -> Element {
        self.sizes
            .iter()
            .map(|&n| CMat::identity(n, n) * Complex64::new(0.0, rng.gen_range(-3.0..3.0)))
            .collect()
    }

    /// Cayley transform `(1 - x/2)⁻¹ (1 + x/2)`, unitary for anti-hermitian
    /// `x` and fixed by `σ` whenever `x` is.
    fn cayley(&self, x: &Element) -> Element {
        x.iter()
            .map(|m| {
                let n = m.nrows();
                let half = m * Complex64::new(0.5, 0.0);
                let id = CMat::identity(n, n);
                let inv = (&id - &half).try_inverse().expect("1 - x/2 is invertible for anti-hermitian x");
                inv * (&id + &half)
            })
            .collect()
    }

    fn random_unitary(&self, rng: &mut ChaCha8Rng) -> Element {
        let x = self.random_antihermitian(rng);
        self.cayley(&self.real_part(&x))
    }

    fn is_central(&self, u: &Element) -> bool {
        u.iter().all(|m| {
            let n = m.nrows();
            let c = m.trace() / Complex64::new(n as f64, 0.0);
            max_abs(&(m - CMat::identity(n, n) * c)) < TOLERANCE
        })
    }

    fn is_sign(&self, u: &Element) -> bool {
        [1.0, -1.0].iter().any(|&s| {
            u.iter().all(|m| {
                let n = m.nrows();
                max_abs(&(m - CMat::identity(n, n) * Complex64::new(s, 0.0))) < TOLERANCE
            })
        })
    }

    fn vectorize(&self, m: &CMat) -> Vec<f64> {
        m.iter().flat_map(|c| [c.re, c.im]).collect()
    }

    /// Real dimension of the kernel of `x ↦ π(x) + J π(x) J⁻¹` on the Lie
    /// algebra of the unitary group of the real form.
    fn lie_kernel_dim(&self) -> usize {
        let mut basis: Vec<Element> = Vec::new();
        for (b, &n) in self.sizes.iter().enumerate() {
            let zero: Element = self.sizes.iter().map(|&m| CMat::zeros(m, m)).collect();
            for i in 0..n {
                for j in i..n {
                    let mut pairs = Vec::new();
                    if i == j {
                        pairs.push(vec![((i, i), Complex64::new(0.0, 1.0))]);
                    } else {
                        pairs.push(vec![((i, j), Complex64::new(1.0, 0.0)), ((j, i), Complex64::new(-1.0, 0.0))]);
                        pairs.push(vec![((i, j), Complex64::new(0.0, 1.0)), ((j, i), Complex64::new(0.0, 1.0))]);
                    }
                    for p in pairs {
                        let mut x = zero.clone();
                        for ((r, c), v) in p {
                            x[b][(r, c)] = v;
                        }
                        basis.push(self.real_part(&x));
                    }
                }
            }
        }
        let cols = basis.len();
        let flat = |f: &dyn Fn(&Element) -> Vec<f64>| -> DMatrix<f64> {
            let vs: Vec<Vec<f64>> = basis.iter().map(f).collect();
            DMatrix::from_fn(vs[0].len(), cols, |r, c| vs[c][r])
        };
        let domain = flat(&|x: &Element| x.iter().flat_map(|m| self.vectorize(m)).collect());
        let image = flat(&|x: &Element| {
            let p = self.rep(x);
            self.vectorize(&(&p + self.opposite(&p)))
        });
        domain.rank(TOLERANCE) - image.rank(TOLERANCE)
    }
}

/// Outcome of [`classical_gauge_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalGaugeReport {
    pub triple: String,
    pub kernel: KernelClass,
    pub samples: usize,
    /// Samples with `u J u J⁻¹ = 1` within tolerance.
    pub kernel_hits: usize,
    /// Samples whose kernel verdict disagrees with the expected class.
    pub misclassified: usize,
    /// Largest `|u J u J⁻¹ - 1|` among kernel hits.
    pub max_kernel_residual: f64,
    /// Smallest `|u J u J⁻¹ - 1|` among samples outside the expected kernel.
    pub min_outside_residual: f64,
    pub lie_kernel_dim: usize,
    pub expected_lie_kernel_dim: usize,
}

impl ClassicalGaugeReport {
    pub fn passed(&self) -> bool {
        self.misclassified == 0 && self.lie_kernel_dim == self.expected_lie_kernel_dim
    }
}

/// Samples unitaries of the real algebra (generic ones, central ones and
/// `±1`) and checks that exactly those in the expected kernel satisfy
/// `u J u J⁻¹ = 1`; also computes the dimension of the kernel's Lie algebra.
pub fn classical_gauge_check(
    t: &FiniteSpectralTriple,
    trials: usize,
    seed: u64,
) -> Result<ClassicalGaugeReport> {
    let kernel = t.kernel().ok_or_else(|| {
        Error::UnsupportedSpec(format!("{}: no classical gauge kernel is recorded", t.name()))
    })?;
    let nm = Numeric::new(t);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let id = CMat::identity(nm.dim, nm.dim);
    let mut report = ClassicalGaugeReport {
        triple: t.name().to_string(),
        kernel,
        samples: 0,
        kernel_hits: 0,
        misclassified: 0,
        max_kernel_residual: 0.0,
        min_outside_residual: f64::INFINITY,
        lie_kernel_dim: nm.lie_kernel_dim(),
        expected_lie_kernel_dim: match kernel {
            KernelClass::Circle => 1,
            KernelClass::Signs => 0,
        },
    };
    for k in 0..trials.max(1) {
        let u: Element = match k % 3 {
            _ if k == 0 => nm.sizes.iter().map(|&n| CMat::identity(n, n)).collect(),
            0 => nm.random_unitary(&mut rng),
            1 => {
                let x = nm.random_central(&mut rng);
                let c = nm.cayley(&nm.real_part(&x));
                let s = if rng.gen_bool(0.5) { -1.0 } else { 1.0 };
                c.into_iter().map(|m| m * Complex64::new(s, 0.0)).collect()
            }
            _ => {
                let s = if rng.gen_bool(0.5) { -1.0 } else { 1.0 };
                nm.sizes.iter().map(|&n| CMat::identity(n, n) * Complex64::new(s, 0.0)).collect()
            }
        };
        let residual = max_abs(&(nm.gauge(&u) - &id));
        let hit = residual < TOLERANCE;
        let expected = match kernel {
            KernelClass::Circle => nm.is_central(&u),
            KernelClass::Signs => nm.is_sign(&u),
        };
        report.samples += 1;
        if hit {
            report.kernel_hits += 1;
            report.max_kernel_residual = report.max_kernel_residual.max(residual);
        }
        if !expected {
            report.min_outside_residual = report.min_outside_residual.min(residual);
        }
        if hit != expected {
            report.misclassified += 1;
        }
    }
    Ok(report)
}

/// Value of a generator at the classical point `g`: `u[b:i,j] ↦ (g_b)_ij`,
/// starred generators conjugated. Blocks are matched by position.
fn eval_at(p: &NCPoly, g: &Element, labels: &[usize]) -> Complex64 {
    let value = |x: Gen| -> Complex64 {
        let b = labels.iter().position(|&l| l == x.block()).expect("generator of a known block");
        let v = g[b][(x.row() - 1, x.col() - 1)];
        if x.is_star() {
            v.conj()
        } else {
            v
        }
    };
    p.terms()
        .map(|(w, c)| w.gens().iter().fold(num(c), |acc, &x| acc * value(x)))
        .sum()
}

/// Largest deviation, over random unitaries `g` of the real algebra, between
/// `candidate` evaluated at the character `u ↦ g` and `π(g) J π(g) J⁻¹`
/// computed directly in floating point. `pres` must be the unitary group of
/// the algebra with blocks in complexified order.
pub fn classical_point_residual(
    t: &FiniteSpectralTriple,
    pres: &CQGPresentation,
    candidate: &GenMatrix,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    let nm = Numeric::new(t);
    let labels: Vec<usize> = pres.blocks().iter().map(|b| b.label).collect();
    if labels.len() != nm.sizes.len() || candidate.rows() != nm.dim || candidate.cols() != nm.dim {
        return Err(Error::DimensionMismatch(format!(
            "{} against the triple {}",
            pres.name(),
            t.name()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let g = nm.random_unitary(&mut rng);
        let direct = nm.gauge(&g);
        let mut at = CMat::zeros(nm.dim, nm.dim);
        for (i, j, p) in candidate.entries() {
            at[(i, j)] = eval_at(p, &g, &labels);
        }
        worst = worst.max(max_abs(&(at - direct)));
    }
    Ok(worst)
}
