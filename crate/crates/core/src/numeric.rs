//! Numeric unitarization: orthogonal projections `P_i` onto nested subspaces
//! with `sum alpha_i P_i = gamma I`, found by descent over unitary frames.
//!
//! Each branch gets one unitary frame `U` of `C^{d0}`; element `i` of the
//! branch is the span of the first `d_i` columns. Retraction by QR keeps the
//! nested column spans, so chain containment holds exactly at every step.

use nalgebra::{Complex, DMatrix};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::form::Weight;
use crate::poset::{check_trace, DimVector, PrimitivePoset};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

#[derive(Clone, Debug, PartialEq)]
pub struct UnitarizeOptions {
    /// Success iff residual <= success_tol * gamma * sqrt(d0).
    pub success_tol: f64,
    /// A restart stops early once residual <= inner_tol * gamma * sqrt(d0).
    pub inner_tol: f64,
    pub max_iters: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for UnitarizeOptions {
    fn default() -> Self {
        Self {
            success_tol: 1e-8,
            inner_tol: 1e-12,
            max_iters: 5000,
            restarts: 32,
            seed: 0,
        }
    }
}

/// A projection tuple with the data that produced it.
#[derive(Clone, Debug)]
pub struct NumericRep {
    pub poset: PrimitivePoset,
    pub dim: DimVector,
    pub weight: Weight,
    /// `projectors[j][i]` is the `d0 × d0` projection for element `(j, i)`.
    pub projectors: Vec<Vec<CMatrix>>,
    /// `||sum alpha P - gamma I||_F`.
    pub residual: f64,
    /// Iterations summed over all restarts that ran.
    pub iterations: usize,
    pub restarts: usize,
    pub seed: u64,
}

/// Weight entries as floats, gamma normalized to 1, with the scale factor.
fn normalized(w: &Weight) -> (Vec<Vec<f64>>, f64) {
    let gamma = w.gamma().to_f64().expect("finite weight");
    let alphas = w
        .alphas()
        .iter()
        .map(|b| {
            b.iter()
                .map(|a| a.to_f64().expect("finite weight") / gamma)
                .collect()
        })
        .collect();
    (alphas, gamma)
}

fn check_chains(p: &PrimitivePoset, d: &DimVector) -> Result<()> {
    d.check_shape(p)?;
    for (j, b) in d.branches.iter().enumerate() {
        let monotone = b.windows(2).all(|w| w[0] <= w[1]);
        if !monotone || b.iter().any(|&x| x > d.d0) {
            return Err(Error::ShapeMismatch(format!(
                "branch {} of {d} is not a chain of subspaces",
                j + 1
            )));
        }
    }
    Ok(())
}

/// Per-branch diagonal: entry `c` is the sum of the weights of the elements
/// whose subspace contains frame column `c`.
fn branch_diagonals(d: &DimVector, alphas: &[Vec<f64>]) -> Vec<Vec<f64>> {
    d.branches
        .iter()
        .zip(alphas)
        .map(|(dims, a)| {
            (0..d.d0)
                .map(|c| {
                    dims.iter()
                        .zip(a)
                        .filter(|(&di, _)| di > c)
                        .map(|(_, &x)| x)
                        .sum()
                })
                .collect()
        })
        .collect()
}

/// `U diag(D) U^*`.
fn weighted_projector(u: &CMatrix, diag: &[f64]) -> CMatrix {
    let mut scaled = u.clone();
    for (c, &x) in diag.iter().enumerate() {
        scaled.column_mut(c).scale_mut(x);
    }
    scaled * u.adjoint()
}

/// `R = sum_j U_j D_j U_j^* - I` at gamma = 1.
fn residual_matrix(frames: &[CMatrix], diags: &[Vec<f64>], n: usize) -> CMatrix {
    let mut r = -CMatrix::identity(n, n);
    for (u, d) in frames.iter().zip(diags) {
        r += weighted_projector(u, d);
    }
    r
}

fn objective(frames: &[CMatrix], diags: &[Vec<f64>], n: usize) -> f64 {
    residual_matrix(frames, diags, n).norm_squared()
}

fn skew(a: &CMatrix) -> CMatrix {
    (a - a.adjoint()) * C64::new(0.5, 0.0)
}

/// Q factor; its leading columns span the same nested subspaces as `a`'s.
fn retract(a: CMatrix) -> CMatrix {
    a.qr().q()
}

fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let a = CMatrix::from_fn(n, n, |_, _| {
        C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    retract(a)
}

struct Run {
    frames: Vec<CMatrix>,
    value: f64,
    iterations: usize,
}

/// Riemannian steepest descent with Barzilai-Borwein initial steps and
/// Armijo backtracking.
fn descend(mut frames: Vec<CMatrix>, diags: &[Vec<f64>], n: usize, opts: &UnitarizeOptions) -> Run {
    let stop = (opts.inner_tol * (n as f64).sqrt()).powi(2);
    let mut value = objective(&frames, diags, n);
    let mut step = 0.1;
    let mut prev: Option<(Vec<CMatrix>, f64)> = None;
    let mut iterations = 0;
    while iterations < opts.max_iters && value > stop {
        iterations += 1;
        let r = residual_matrix(&frames, diags, n);
        // Riemannian gradient in the Lie algebra: skew(U^* 4 R U D).
        let omegas: Vec<CMatrix> = frames
            .iter()
            .zip(diags)
            .map(|(u, d)| {
                let mut g = &r * u * C64::new(4.0, 0.0);
                for (c, &x) in d.iter().enumerate() {
                    g.column_mut(c).scale_mut(x);
                }
                skew(&(u.adjoint() * g))
            })
            .collect();
        let grad_sq: f64 = omegas.iter().map(CMatrix::norm_squared).sum();
        if grad_sq < 1e-30 {
            break;
        }
        if let Some((prev_omegas, prev_step)) = &prev {
            // BB1 step from the change in gradient.
            let diff: f64 = omegas
                .iter()
                .zip(prev_omegas)
                .map(|(a, b)| (a - b).norm_squared())
                .sum::<f64>()
                .sqrt();
            let moved = prev_step
                * prev_omegas
                    .iter()
                    .map(CMatrix::norm_squared)
                    .sum::<f64>()
                    .sqrt();
            if diff > 0.0 && moved > 0.0 {
                step = (moved / diff).clamp(1e-6, 10.0);
            }
        }
        let mut accepted = false;
        let mut t = step;
        for _ in 0..60 {
            let trial: Vec<CMatrix> = frames
                .iter()
                .zip(&omegas)
                .map(|(u, o)| retract(u - u * o * C64::new(t, 0.0)))
                .collect();
            let v = objective(&trial, diags, n);
            if v <= value - 1e-4 * t * grad_sq {
                frames = trial;
                value = v;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
        prev = Some((omegas, t));
        step = t;
    }
    Run {
        frames,
        value,
        iterations,
    }
}

/// Searches for projections realizing `w` on dimension vector `d`.
pub fn unitarize(
    p: &PrimitivePoset,
    d: &DimVector,
    w: &Weight,
    opts: &UnitarizeOptions,
) -> Result<NumericRep> {
    w.check_shape(p)?;
    check_chains(p, d)?;
    check_trace(d, w)?;
    let n = d.d0;
    let (alphas, gamma) = normalized(w);
    let diags = branch_diagonals(d, &alphas);
    let target = opts.success_tol * (n as f64).sqrt();
    let mut best: Option<Run> = None;
    let mut iterations = 0;
    let mut restarts = 0;
    for k in 0..opts.restarts.max(1) {
        restarts += 1;
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(k as u64);
        let frames = (0..p.width())
            .map(|_| random_unitary(n, &mut rng))
            .collect();
        let run = descend(frames, &diags, n, opts);
        iterations += run.iterations;
        if best.as_ref().is_none_or(|b| run.value < b.value) {
            best = Some(run);
        }
        if best.as_ref().is_some_and(|b| b.value.sqrt() <= target) {
            break;
        }
    }
    let best = best.expect("at least one restart");
    let projectors = frames_to_projectors(&best.frames, d);
    let residual = relation_residual(&projectors, w)?;
    if residual > opts.success_tol * gamma * (n as f64).sqrt() {
        return Err(Error::NoConvergence {
            best_residual: residual,
        });
    }
    Ok(NumericRep {
        poset: p.clone(),
        dim: d.clone(),
        weight: w.clone(),
        projectors,
        residual,
        iterations,
        restarts,
        seed: opts.seed,
    })
}

fn frames_to_projectors(frames: &[CMatrix], d: &DimVector) -> Vec<Vec<CMatrix>> {
    frames
        .iter()
        .zip(&d.branches)
        .map(|(u, dims)| {
            dims.iter()
                .map(|&k| {
                    let cols = u.columns(0, k);
                    cols * cols.adjoint()
                })
                .collect()
        })
        .collect()
}

/// `||sum alpha P - gamma I||_F`.
pub fn relation_residual(projectors: &[Vec<CMatrix>], w: &Weight) -> Result<f64> {
    let shape: Vec<usize> = projectors.iter().map(Vec::len).collect();
    if shape != w.shape() {
        return Err(Error::ShapeMismatch(format!(
            "{} projector branches for weight of shape {:?}",
            projectors.len(),
            w.shape()
        )));
    }
    let n = projectors
        .iter()
        .flatten()
        .map(|m| m.nrows())
        .next()
        .unwrap_or(0);
    let gamma = w.gamma().to_f64().expect("finite weight");
    let mut r = CMatrix::identity(n, n) * C64::new(-gamma, 0.0);
    for (b, a) in projectors.iter().zip(w.alphas()) {
        for (m, x) in b.iter().zip(a) {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::ShapeMismatch("projectors differ in size".into()));
            }
            r += m * C64::new(x.to_f64().expect("finite weight"), 0.0);
        }
    }
    Ok(r.norm())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StructureReport {
    /// Largest `||P^2 - P||_F`.
    pub idempotent: f64,
    /// Largest `||P - P^*||_F`.
    pub hermitian: f64,
    /// Largest `||P_i P_{i+1} - P_i||_F` along a chain.
    pub containment: f64,
    /// Eigenvalues above 1/2, per element.
    pub ranks: Vec<Vec<usize>>,
    pub ranks_match: bool,
    pub passed: bool,
}

/// Projection, containment and rank invariants of a projection tuple.
pub fn structure_check(
    projectors: &[Vec<CMatrix>],
    p: &PrimitivePoset,
    d: &DimVector,
    tol: f64,
) -> Result<StructureReport> {
    d.check_shape(p)?;
    let shape: Vec<usize> = projectors.iter().map(Vec::len).collect();
    if shape != p.branches() {
        return Err(Error::ShapeMismatch("projectors do not match poset".into()));
    }
    let mut idempotent: f64 = 0.0;
    let mut hermitian: f64 = 0.0;
    let mut containment: f64 = 0.0;
    let mut ranks = Vec::new();
    for chain in projectors {
        let mut chain_ranks = Vec::new();
        for (i, m) in chain.iter().enumerate() {
            if m.nrows() != d.d0 || m.ncols() != d.d0 {
                return Err(Error::ShapeMismatch(
                    "projector size differs from d0".into(),
                ));
            }
            idempotent = idempotent.max((m * m - m).norm());
            hermitian = hermitian.max((m - m.adjoint()).norm());
            if let Some(next) = chain.get(i + 1) {
                containment = containment.max((m * next - m).norm());
            }
            let sym = (m + m.adjoint()) * C64::new(0.5, 0.0);
            let rank = sym
                .symmetric_eigenvalues()
                .iter()
                .filter(|&&e| e > 0.5)
                .count();
            chain_ranks.push(rank);
        }
        ranks.push(chain_ranks);
    }
    let ranks_match = ranks == d.branches;
    let passed = ranks_match && idempotent <= tol && hermitian <= tol && containment <= tol;
    Ok(StructureReport {
        idempotent,
        hermitian,
        containment,
        ranks,
        ranks_match,
        passed,
    })
}

/// Dimension of `{X : X P = P X for all P}`, counting singular values of the
/// stacked commutator system below `tol`.
pub fn commutant_dim(projectors: &[Vec<CMatrix>], n: usize, tol: f64) -> usize {
    let all: Vec<&CMatrix> = projectors.iter().flatten().collect();
    if all.is_empty() || n == 0 {
        return n * n;
    }
    let nn = n * n;
    let mut k = CMatrix::zeros(all.len() * nn, nn);
    // vec(XP - PX) in column-major order: (P^T ⊗ I - I ⊗ P) vec(X).
    for (b, m) in all.iter().enumerate() {
        for col in 0..n {
            for row in 0..n {
                let x = col * n + row;
                // Effect of the unit matrix E_{row,col} on each entry (r, c).
                for c in 0..n {
                    k[(b * nn + c * n + row, x)] += m[(col, c)];
                }
                for r in 0..n {
                    k[(b * nn + col * n + r, x)] -= m[(r, row)];
                }
            }
        }
    }
    let sv = k.singular_values();
    sv.iter().filter(|&&s| s < tol).count() + nn.saturating_sub(sv.len())
}

/// Three lines in `C^2` at mutual angles of 60 degrees: `P_1 + P_2 + P_3 = (3/2) I`.
pub fn equiangular_lines() -> Vec<Vec<CMatrix>> {
    (0..3)
        .map(|k| {
            let t = std::f64::consts::PI * k as f64 / 3.0;
            let v =
                CMatrix::from_column_slice(2, 1, &[C64::new(t.cos(), 0.0), C64::new(t.sin(), 0.0)]);
            vec![&v * v.adjoint()]
        })
        .collect()
}

/// Direct sum of projection tuples (block diagonal).
pub fn block_sum(a: &[Vec<CMatrix>], b: &[Vec<CMatrix>]) -> Vec<Vec<CMatrix>> {
    a.iter()
        .zip(b)
        .map(|(ca, cb)| {
            ca.iter()
                .zip(cb)
                .map(|(x, y)| {
                    let n = x.nrows() + y.nrows();
                    let mut m = CMatrix::zeros(n, n);
                    m.view_mut((0, 0), (x.nrows(), x.ncols())).copy_from(x);
                    m.view_mut((x.nrows(), x.ncols()), (y.nrows(), y.ncols()))
                        .copy_from(y);
                    m
                })
                .collect()
        })
        .collect()
}

fn serialize_matrix(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|r| {
            (0..m.ncols())
                .map(|c| [m[(r, c)].re, m[(r, c)].im])
                .collect()
        })
        .collect()
}

#[derive(Serialize)]
struct NumericRepr<'a> {
    poset: &'a PrimitivePoset,
    dim: &'a DimVector,
    weight: &'a Weight,
    /// Branch-major; rows of `[re, im]` pairs.
    projectors: Vec<Vec<Vec<[f64; 2]>>>,
    residual: f64,
    seed: u64,
    iterations: usize,
    restarts: usize,
}

impl Serialize for NumericRep {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        NumericRepr {
            poset: &self.poset,
            dim: &self.dim,
            weight: &self.weight,
            projectors: self
                .projectors
                .iter()
                .flatten()
                .map(serialize_matrix)
                .collect(),
            residual: self.residual,
            seed: self.seed,
            iterations: self.iterations,
            restarts: self.restarts,
        }
        .serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::{parse_dim, parse_weight};

    fn poset(b: &[usize]) -> PrimitivePoset {
        PrimitivePoset::new(b.to_vec()).unwrap()
    }

    #[test]
    fn equiangular_closed_form() {
        let ps = equiangular_lines();
        let w = parse_weight("1;1;1;3/2").unwrap();
        assert!(relation_residual(&ps, &w).unwrap() <= 1e-12);
        assert_eq!(commutant_dim(&ps, 2, 1e-8), 1);
        let doubled = block_sum(&ps, &ps);
        assert!(commutant_dim(&doubled, 4, 1e-8) >= 2);
        let p = poset(&[1, 1, 1]);
        let report = structure_check(&ps, &p, &parse_dim("1;1;1;2").unwrap(), 1e-8).unwrap();
        assert!(report.passed);
    }

    #[test]
    fn empty_projectors_residual() {
        let zero = vec![vec![CMatrix::zeros(3, 3)]];
        let w = parse_weight("1;2").unwrap();
        let r = relation_residual(&zero, &w).unwrap();
        assert!((r - 2.0 * 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn d4_top_root() {
        let p = poset(&[1, 1, 1]);
        let d = parse_dim("1;1;1;2").unwrap();
        let w = parse_weight("1;1;1;3/2").unwrap();
        let rep = unitarize(&p, &d, &w, &UnitarizeOptions::default()).unwrap();
        assert!(rep.residual <= 1e-8 * 1.5 * 2f64.sqrt());
        assert!(
            structure_check(&rep.projectors, &p, &d, 1e-8)
                .unwrap()
                .passed
        );
        assert_eq!(commutant_dim(&rep.projectors, 2, 1e-6), 1);
    }

    #[test]
    fn trace_obstruction_first() {
        let p = poset(&[1, 1, 1]);
        let d = parse_dim("1;1;1;2").unwrap();
        let w = parse_weight("3;2;2;3").unwrap();
        assert!(matches!(
            unitarize(&p, &d, &w, &UnitarizeOptions::default()),
            Err(Error::TraceObstruction { .. })
        ));
    }

    #[test]
    fn inadmissible_weight_does_not_converge() {
        // a = 2, b = d = 1/2 satisfies the trace but violates a < g.
        let p = poset(&[1, 1, 1]);
        let d = parse_dim("1;1;1;2").unwrap();
        let w = parse_weight("2;1/2;1/2;3/2").unwrap();
        let opts = UnitarizeOptions {
            restarts: 2,
            max_iters: 500,
            ..UnitarizeOptions::default()
        };
        assert!(matches!(
            unitarize(&p, &d, &w, &opts),
            Err(Error::NoConvergence { .. })
        ));
    }
}
