//! Exact linear representations of primitive posets: a space `V` with one
//! subspace per element, nested along each chain.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::poset::{DimVector, PrimitivePoset};
use crate::Rational;

/// Subspaces stored as basis matrices (columns span the subspace).
#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceRep {
    poset: PrimitivePoset,
    ambient: usize,
    bases: Vec<Vec<QMatrix>>,
}

impl SubspaceRep {
    /// Checks shapes, full column rank of every basis and containment along
    /// each chain.
    pub fn new(poset: PrimitivePoset, ambient: usize, bases: Vec<Vec<QMatrix>>) -> Result<Self> {
        if bases.len() != poset.width()
            || bases
                .iter()
                .zip(poset.branches())
                .any(|(b, &k)| b.len() != k)
        {
            return Err(Error::ShapeMismatch(format!(
                "expected bases for poset {poset}"
            )));
        }
        for (j, chain) in bases.iter().enumerate() {
            for (i, b) in chain.iter().enumerate() {
                if b.rows() != ambient {
                    return Err(Error::ShapeMismatch(format!(
                        "basis ({},{}) has {} rows, ambient dimension is {ambient}",
                        j + 1,
                        i + 1,
                        b.rows()
                    )));
                }
                if !b.has_full_column_rank() {
                    return Err(Error::RankDeficient {
                        branch: j + 1,
                        index: i + 1,
                    });
                }
                if i > 0 && !b.span_contains(&chain[i - 1]) {
                    return Err(Error::ContainmentViolation {
                        branch: j + 1,
                        index: i,
                    });
                }
            }
        }
        Ok(Self {
            poset,
            ambient,
            bases,
        })
    }

    /// Integer column lists, one entry per element in branch-major order.
    pub fn from_int_cols(
        poset: PrimitivePoset,
        ambient: usize,
        elements: &[&[&[i64]]],
    ) -> Result<Self> {
        if elements.len() != poset.len() {
            return Err(Error::ShapeMismatch(format!(
                "expected {} subspaces, got {}",
                poset.len(),
                elements.len()
            )));
        }
        let mut it = elements.iter();
        let bases = poset
            .branches()
            .iter()
            .map(|&k| {
                it.by_ref()
                    .take(k)
                    .map(|c| QMatrix::from_int_cols(ambient, c))
                    .collect()
            })
            .collect();
        Self::new(poset, ambient, bases)
    }

    pub fn poset(&self) -> &PrimitivePoset {
        &self.poset
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn bases(&self) -> &[Vec<QMatrix>] {
        &self.bases
    }

    pub fn basis(&self, branch: usize, index: usize) -> &QMatrix {
        &self.bases[branch][index]
    }

    pub fn dim_vector(&self) -> DimVector {
        DimVector::new(
            self.ambient,
            self.bases
                .iter()
                .map(|c| c.iter().map(QMatrix::cols).collect())
                .collect(),
        )
    }

    /// Image under an invertible change of basis `g`.
    pub fn transform(&self, g: &QMatrix) -> Result<Self> {
        if g.rows() != self.ambient || g.inverse().is_none() {
            return Err(Error::ShapeMismatch(
                "base change must be invertible".into(),
            ));
        }
        let bases = self
            .bases
            .iter()
            .map(|c| c.iter().map(|b| g.mul(b)).collect())
            .collect();
        Self::new(self.poset.clone(), self.ambient, bases)
    }

    fn elements(&self) -> impl Iterator<Item = &QMatrix> {
        self.bases.iter().flatten()
    }
}

/// Zero representation of `p` in dimension `ambient` (all subspaces zero).
pub fn zero_rep(p: &PrimitivePoset, ambient: usize) -> SubspaceRep {
    let bases = p
        .branches()
        .iter()
        .map(|&k| vec![QMatrix::zeros(ambient, 0); k])
        .collect();
    SubspaceRep::new(p.clone(), ambient, bases).expect("zero subspaces are valid")
}

pub fn direct_sum(r1: &SubspaceRep, r2: &SubspaceRep) -> Result<SubspaceRep> {
    if r1.poset != r2.poset {
        return Err(Error::PosetMismatch);
    }
    let bases = r1
        .bases
        .iter()
        .zip(&r2.bases)
        .map(|(c1, c2)| c1.iter().zip(c2).map(|(a, b)| a.block_diag(b)).collect())
        .collect();
    SubspaceRep::new(r1.poset.clone(), r1.ambient + r2.ambient, bases)
}

/// Basis of `{C : V -> W | C(V_i) ⊆ W_i}`, each as a `dim W × dim V` matrix.
pub fn hom_space(r1: &SubspaceRep, r2: &SubspaceRep) -> Result<Vec<QMatrix>> {
    if r1.poset != r2.poset {
        return Err(Error::PosetMismatch);
    }
    let (n, m) = (r1.ambient, r2.ambient);
    let unknowns = m * n;
    if unknowns == 0 {
        return Ok(Vec::new());
    }
    // L_i C B_i = 0 with L_i the left annihilator of W_i; C is row-major.
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for (b, w) in r1.elements().zip(r2.elements()) {
        let l = w.left_annihilator();
        for a in 0..l.rows() {
            for c in 0..b.cols() {
                let mut row = vec![Rational::zero(); unknowns];
                for r in 0..m {
                    if l[(a, r)].is_zero() {
                        continue;
                    }
                    for s in 0..n {
                        row[r * n + s] = &l[(a, r)] * &b[(s, c)];
                    }
                }
                rows.push(row);
            }
        }
    }
    let basis = if rows.is_empty() {
        QMatrix::identity(unknowns)
    } else {
        QMatrix::from_rows(rows).nullspace()
    };
    Ok((0..basis.cols())
        .map(|k| {
            let v = basis.col(k);
            QMatrix::from_rows(v.chunks(n).map(<[Rational]>::to_vec).collect())
        })
        .collect())
}

pub fn end_dim(r: &SubspaceRep) -> usize {
    hom_space(r, r).expect("same poset").len()
}

pub fn is_brick(r: &SubspaceRep) -> bool {
    r.ambient > 0 && end_dim(r) == 1
}

const INDECOMPOSABLE_ROUNDS: usize = 16;
const ISOMORPHISM_ROUNDS: usize = 32;

/// Whether `End(r)` is local: every sampled endomorphism `X` must be a scalar
/// plus a nilpotent. A failing sample certifies decomposability; passing all
/// rounds means indecomposable with high probability.
pub fn is_indecomposable(r: &SubspaceRep, seed: u64) -> bool {
    let n = r.ambient;
    if n == 0 {
        return false;
    }
    let basis = hom_space(r, r).expect("same poset");
    if basis.len() == 1 {
        return true;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = Rational::from_integer(n.into());
    for _ in 0..INDECOMPOSABLE_ROUNDS {
        let x = random_combination(&basis, &mut rng, -1000, 1000);
        let lambda = x.trace() / &size;
        let shifted = x.add(&QMatrix::identity(n).scale(&-lambda));
        if !shifted.pow(n as u32).is_zero() {
            return false;
        }
    }
    true
}

/// Whether some `C` in `Hom(r1, r2)` is invertible, tested by evaluating
/// `det(sum x_i C_i)` at random points in `[1, 10^6]`. A nonzero value is a
/// certificate; all-zero answers are wrong with probability at most
/// `(d0 / 10^6)^32`.
pub fn are_isomorphic(r1: &SubspaceRep, r2: &SubspaceRep, seed: u64) -> Result<bool> {
    if r1.poset != r2.poset {
        return Err(Error::PosetMismatch);
    }
    if r1.dim_vector() != r2.dim_vector() {
        return Ok(false);
    }
    if r1.ambient == 0 {
        return Ok(true);
    }
    let basis = hom_space(r1, r2)?;
    if basis.is_empty() {
        return Ok(false);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..ISOMORPHISM_ROUNDS).any(|_| {
        !random_combination(&basis, &mut rng, 1, 1_000_000)
            .determinant()
            .is_zero()
    }))
}

fn random_combination(basis: &[QMatrix], rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> QMatrix {
    let mut acc = QMatrix::zeros(basis[0].rows(), basis[0].cols());
    for b in basis {
        let c = Rational::from_integer(rng.gen_range(lo..=hi).into());
        acc = acc.add(&b.scale(&c));
    }
    acc
}

/// Representation of the quiver whose vertices are the center (vertex 0) and
/// the poset elements (branch-major, from 1); each element has one arrow to
/// its successor in the chain, the top of a chain points to the center.
#[derive(Clone, Debug, PartialEq)]
pub struct QuiverRep {
    pub poset: PrimitivePoset,
    /// Space dimension per vertex.
    pub dims: Vec<usize>,
    /// `(source, target, matrix)`, one per element, in element order.
    pub arrows: Vec<(usize, usize, QMatrix)>,
}

impl QuiverRep {
    pub fn is_monomorphic(&self) -> Vec<bool> {
        self.arrows
            .iter()
            .map(|(_, _, m)| m.has_full_column_rank())
            .collect()
    }
}

fn vertex_of(p: &PrimitivePoset, branch: usize, index: usize) -> usize {
    1 + p.branches()[..branch].iter().sum::<usize>() + index
}

pub fn to_quiver_rep(r: &SubspaceRep) -> QuiverRep {
    let p = &r.poset;
    let mut dims = vec![r.ambient];
    let mut arrows = Vec::new();
    for (j, chain) in r.bases.iter().enumerate() {
        for (i, b) in chain.iter().enumerate() {
            dims.push(b.cols());
            let src = vertex_of(p, j, i);
            if i + 1 < chain.len() {
                let next = &chain[i + 1];
                let m = next.solve(b).expect("chain is nested");
                arrows.push((src, src + 1, m));
            } else {
                arrows.push((src, 0, b.clone()));
            }
        }
    }
    QuiverRep {
        poset: p.clone(),
        dims,
        arrows,
    }
}

/// Images of the element spaces in the center space; every arrow must be
/// injective.
pub fn from_quiver_rep(q: &QuiverRep) -> Result<SubspaceRep> {
    let p = &q.poset;
    if q.arrows.len() != p.len() || q.dims.len() != p.len() + 1 {
        return Err(Error::ShapeMismatch(
            "quiver data does not match poset".into(),
        ));
    }
    for (k, (src, tgt, m)) in q.arrows.iter().enumerate() {
        if m.rows() != q.dims[*tgt] || m.cols() != q.dims[*src] {
            return Err(Error::ShapeMismatch(format!(
                "arrow {} has wrong size",
                k + 1
            )));
        }
        if !m.has_full_column_rank() {
            return Err(Error::NonMonomorphicArrow(k + 1));
        }
    }
    let mut bases = Vec::new();
    for (j, &k) in p.branches().iter().enumerate() {
        let mut chain: Vec<QMatrix> = vec![QMatrix::zeros(0, 0); k];
        let top = vertex_of(p, j, k - 1) - 1;
        chain[k - 1] = q.arrows[top].2.clone();
        for i in (0..k - 1).rev() {
            let a = &q.arrows[vertex_of(p, j, i) - 1].2;
            chain[i] = chain[i + 1].mul(a);
        }
        bases.push(chain);
    }
    SubspaceRep::new(p.clone(), q.dims[0], bases)
}

fn forbid_degenerate(lambda: &Rational) -> Result<()> {
    if lambda.is_zero() || lambda.is_one() {
        return Err(Error::ForbiddenParameter(format!("lambda = {lambda}")));
    }
    Ok(())
}

fn cols(rows: usize, cs: Vec<Vec<Rational>>) -> QMatrix {
    QMatrix::from_cols(rows, cs)
}

fn e(n: usize, k: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[k] = Rational::one();
    v
}

fn sum(n: usize, ks: &[usize]) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    for &k in ks {
        v[k] += Rational::one();
    }
    v
}

/// On `(1,1,1,1)`: `V = C^2 ⊕ C^2`, `V_1 = C^2 ⊕ 0`, `V_2 = 0 ⊕ C^2`,
/// `V_3` the diagonal and `V_4` the graph of `[[1, a], [0, 1]]`.
/// Indecomposable with a two-dimensional endomorphism algebra.
pub fn nonbrick_alpha(a: &Rational) -> Result<SubspaceRep> {
    if a.is_zero() {
        return Err(Error::ForbiddenParameter("a = 0".into()));
    }
    let mut graph_2 = sum(4, &[1, 3]);
    graph_2[0] = a.clone();
    SubspaceRep::new(
        PrimitivePoset::new(vec![1, 1, 1, 1])?,
        4,
        vec![
            vec![cols(4, vec![e(4, 0), e(4, 1)])],
            vec![cols(4, vec![e(4, 2), e(4, 3)])],
            vec![cols(4, vec![sum(4, &[0, 2]), sum(4, &[1, 3])])],
            vec![cols(4, vec![sum(4, &[0, 2]), graph_2])],
        ],
    )
}

/// Four lines `e1, e2, e1+e2, e1+λe2` in `C^2` on `(1,1,1,1)`.
pub fn family_1111(lambda: &Rational) -> Result<SubspaceRep> {
    forbid_degenerate(lambda)?;
    let mut v4 = e(2, 0);
    v4[1] = lambda.clone();
    SubspaceRep::new(
        PrimitivePoset::new(vec![1, 1, 1, 1])?,
        2,
        vec![
            vec![cols(2, vec![e(2, 0)])],
            vec![cols(2, vec![e(2, 1)])],
            vec![cols(2, vec![sum(2, &[0, 1])])],
            vec![cols(2, vec![v4])],
        ],
    )
}

/// One-parameter family on `(2,2,2)` in `C^3`.
pub fn family_222(lambda: &Rational) -> Result<SubspaceRep> {
    forbid_degenerate(lambda)?;
    let mut v = sum(3, &[1]);
    v[0] = lambda.clone();
    let diag = sum(3, &[0, 1, 2]);
    SubspaceRep::new(
        PrimitivePoset::new(vec![2, 2, 2])?,
        3,
        vec![
            vec![cols(3, vec![e(3, 0)]), cols(3, vec![e(3, 0), e(3, 1)])],
            vec![cols(3, vec![e(3, 2)]), cols(3, vec![e(3, 1), e(3, 2)])],
            vec![cols(3, vec![diag.clone()]), cols(3, vec![diag, v])],
        ],
    )
}

/// One-parameter family in `C^4` with chains of lengths 3, 3 and 1, so it
/// lives on `(3,3,1)`.
pub fn family_332(lambda: &Rational) -> Result<SubspaceRep> {
    forbid_degenerate(lambda)?;
    let mut v = sum(4, &[2, 3]);
    v[0] = lambda.clone();
    SubspaceRep::new(
        PrimitivePoset::new(vec![3, 3, 1])?,
        4,
        vec![
            vec![
                cols(4, vec![e(4, 0)]),
                cols(4, vec![e(4, 0), e(4, 1)]),
                cols(4, vec![e(4, 0), e(4, 1), e(4, 2)]),
            ],
            vec![
                cols(4, vec![e(4, 3)]),
                cols(4, vec![e(4, 2), e(4, 3)]),
                cols(4, vec![e(4, 1), e(4, 2), e(4, 3)]),
            ],
            vec![cols(4, vec![sum(4, &[0, 1, 2]), v])],
        ],
    )
}

/// One-parameter family on `(5,2,1)` in `C^6`.
pub fn family_521(lambda: &Rational) -> Result<SubspaceRep> {
    forbid_degenerate(lambda)?;
    let flag = |k: usize| cols(6, (0..k).map(|i| e(6, i)).collect());
    let mut v = sum(6, &[2, 4, 5]);
    v[0] = lambda.clone();
    SubspaceRep::new(
        PrimitivePoset::new(vec![5, 2, 1])?,
        6,
        vec![
            (1..=5).map(flag).collect(),
            vec![
                cols(6, vec![e(6, 4), e(6, 5)]),
                cols(6, vec![e(6, 2), e(6, 3), e(6, 4), e(6, 5)]),
            ],
            vec![cols(6, vec![sum(6, &[0, 2, 3, 4]), v, sum(6, &[1, 3])])],
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poset(b: &[usize]) -> PrimitivePoset {
        PrimitivePoset::new(b.to_vec()).unwrap()
    }

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn three_lines() -> SubspaceRep {
        SubspaceRep::from_int_cols(poset(&[1, 1, 1]), 2, &[&[&[1, 0]], &[&[0, 1]], &[&[1, 1]]])
            .unwrap()
    }

    fn point() -> SubspaceRep {
        SubspaceRep::from_int_cols(poset(&[1, 1, 1]), 1, &[&[&[1]], &[&[1]], &[&[1]]]).unwrap()
    }

    #[test]
    fn validation() {
        assert_eq!(three_lines().dim_vector().to_string(), "1;1;1;2");
        let r = SubspaceRep::from_int_cols(poset(&[2]), 2, &[&[&[1, 0], &[0, 1]]]);
        assert!(r.is_err());
        let bad = SubspaceRep::new(
            poset(&[2]),
            2,
            vec![vec![
                QMatrix::from_int_cols(2, &[&[1, 0]]),
                QMatrix::from_int_cols(2, &[&[0, 1]]),
            ]],
        );
        assert_eq!(
            bad,
            Err(Error::ContainmentViolation {
                branch: 1,
                index: 1
            })
        );
        let deficient = SubspaceRep::new(
            poset(&[1]),
            2,
            vec![vec![QMatrix::from_int_cols(2, &[&[1, 1], &[2, 2]])]],
        );
        assert_eq!(
            deficient,
            Err(Error::RankDeficient {
                branch: 1,
                index: 1
            })
        );
    }

    #[test]
    fn end_dims() {
        assert_eq!(end_dim(&nonbrick_alpha(&q(1)).unwrap()), 2);
        assert_eq!(end_dim(&family_1111(&q(2)).unwrap()), 1);
        assert_eq!(end_dim(&point()), 1);
        assert_eq!(end_dim(&direct_sum(&point(), &point()).unwrap()), 4);
        assert_eq!(hom_space(&three_lines(), &point()).unwrap().len(), 2);
        assert!(hom_space(&point(), &three_lines()).unwrap().is_empty());
    }

    #[test]
    fn indecomposability() {
        let nb = nonbrick_alpha(&q(1)).unwrap();
        assert!(is_indecomposable(&nb, 0));
        assert!(!is_brick(&nb));
        assert!(is_brick(&family_1111(&q(3)).unwrap()));
        let split = direct_sum(&point(), &point()).unwrap();
        assert!(!is_indecomposable(&split, 0));
        assert!(!is_indecomposable(&zero_rep(&poset(&[1, 1, 1]), 0), 0));
    }

    #[test]
    fn isomorphism() {
        let a = family_1111(&q(2)).unwrap();
        let b = family_1111(&q(3)).unwrap();
        assert!(are_isomorphic(&a, &a, 1).unwrap());
        assert!(!are_isomorphic(&a, &b, 1).unwrap());
        let g = QMatrix::from_int_rows(&[&[2, 1], &[1, 1]]);
        assert!(are_isomorphic(&a, &a.transform(&g).unwrap(), 1).unwrap());
        assert_eq!(
            are_isomorphic(&a, &three_lines(), 1),
            Err(Error::PosetMismatch)
        );
    }

    #[test]
    fn quiver_round_trip() {
        for r in [
            point(),
            family_222(&q(2)).unwrap(),
            family_521(&q(3)).unwrap(),
        ] {
            let qr = to_quiver_rep(&r);
            assert!(qr.is_monomorphic().iter().all(|&b| b));
            let back = from_quiver_rep(&qr).unwrap();
            assert!(are_isomorphic(&r, &back, 0).unwrap());
        }
        let mut qr = to_quiver_rep(&point());
        qr.arrows[1].2 = QMatrix::zeros(1, 1);
        assert_eq!(from_quiver_rep(&qr), Err(Error::NonMonomorphicArrow(2)));
    }

    #[test]
    fn fixtures_and_parameters() {
        assert!(matches!(
            family_1111(&q(1)),
            Err(Error::ForbiddenParameter(_))
        ));
        assert!(matches!(
            family_222(&q(0)),
            Err(Error::ForbiddenParameter(_))
        ));
        assert!(matches!(
            nonbrick_alpha(&q(0)),
            Err(Error::ForbiddenParameter(_))
        ));
        assert_eq!(
            family_332(&q(2)).unwrap().dim_vector().to_string(),
            "1,2,3;1,2,3;2;4"
        );
        assert_eq!(
            family_521(&q(2)).unwrap().dim_vector().to_string(),
            "1,2,3,4,5;2,4;3;6"
        );
    }
}
