//! Star graphs `T_{k_1+1,...,k_m+1}`, their Tits form and positive roots, and the
//! indecomposable dimension vectors of finite-type primitive posets.
//!
//! Vertex order is the center `v0` first, then each arm branch-major from the
//! chain's minimal element `v(j,1)` up to `v(j,k_j)`, which touches the center.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::poset::{DimVector, PrimitivePoset};

/// Root coordinates, one integer per vertex of a star graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVector(pub Vec<i64>);

impl IntVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn is_positive(&self) -> bool {
        self.0.iter().all(|&x| x >= 0) && self.0.iter().any(|&x| x > 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarGraph {
    arms: Vec<usize>,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl StarGraph {
    pub fn arms(&self) -> &[usize] {
        &self.arms
    }

    pub fn vertex_count(&self) -> usize {
        1 + self.arms.iter().sum::<usize>()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    /// Vertex index of chain element `(branch, index)`.
    pub fn vertex(&self, branch: usize, index: usize) -> usize {
        1 + self.arms[..branch].iter().sum::<usize>() + index
    }

    /// Arm lengths counted with the center, i.e. `k_j + 1`, sorted descending.
    pub fn arm_vertex_counts(&self) -> Vec<usize> {
        let mut c: Vec<usize> = self.arms.iter().map(|k| k + 1).collect();
        c.sort_unstable_by(|a, b| b.cmp(a));
        c
    }

    /// Dynkin criterion for stars: at most two arms, or three arms with
    /// `1/p + 1/q + 1/r > 1`.
    pub fn is_dynkin(&self) -> bool {
        star_criterion(&self.arm_vertex_counts())
    }

    pub fn simple_root(&self, v: usize) -> IntVector {
        let mut x = vec![0; self.vertex_count()];
        x[v] = 1;
        IntVector(x)
    }

    fn reflect(&self, x: &IntVector, v: usize) -> IntVector {
        let pairing: i64 = 2 * x.0[v] - self.adjacency[v].iter().map(|&u| x.0[u]).sum::<i64>();
        let mut y = x.clone();
        y.0[v] -= pairing;
        y
    }

    pub fn to_dim(&self, x: &IntVector) -> Option<DimVector> {
        if x.0.iter().any(|&c| c < 0) {
            return None;
        }
        let mut branches = Vec::with_capacity(self.arms.len());
        for (j, &k) in self.arms.iter().enumerate() {
            let start = self.vertex(j, 0);
            branches.push(x.0[start..start + k].iter().map(|&c| c as usize).collect());
        }
        Some(DimVector::new(x.0[0] as usize, branches))
    }

    pub fn from_dim(&self, d: &DimVector) -> IntVector {
        let mut x = vec![d.d0 as i64];
        for b in &d.branches {
            x.extend(b.iter().map(|&c| c as i64));
        }
        IntVector(x)
    }
}

fn star_criterion(counts: &[usize]) -> bool {
    match counts.len() {
        0..=2 => true,
        3 => {
            // 1/p + 1/q + 1/r > 1  <=>  qr + pr + pq > pqr
            let (p, q, r) = (counts[0], counts[1], counts[2]);
            q * r + p * r + p * q > p * q * r
        }
        _ => false,
    }
}

pub fn star_graph(p: &PrimitivePoset) -> StarGraph {
    let arms = p.branches().to_vec();
    let n = 1 + arms.iter().sum::<usize>();
    let mut edges = Vec::new();
    let mut start = 1;
    for &k in &arms {
        for i in 0..k - 1 {
            edges.push((start + i, start + i + 1));
        }
        edges.push((start + k - 1, 0));
        start += k;
    }
    let mut adjacency = vec![Vec::new(); n];
    for &(u, w) in &edges {
        adjacency[u].push(w);
        adjacency[w].push(u);
    }
    StarGraph {
        arms,
        edges,
        adjacency,
    }
}

/// `q(x) = sum x_v^2 - sum_{edges} x_u x_w`.
pub fn tits_form(g: &StarGraph, x: &IntVector) -> Result<i64> {
    if x.len() != g.vertex_count() {
        return Err(Error::ShapeMismatch(format!(
            "vector of length {} on a graph with {} vertices",
            x.len(),
            g.vertex_count()
        )));
    }
    let squares: i64 = x.0.iter().map(|c| c * c).sum();
    let cross: i64 = g.edges.iter().map(|&(u, w)| x.0[u] * x.0[w]).sum();
    Ok(squares - cross)
}

/// Positive roots by closing the simple roots under simple reflections,
/// keeping only positive images.
pub fn positive_roots_by_reflection(g: &StarGraph) -> Result<BTreeSet<IntVector>> {
    if !g.is_dynkin() {
        return Err(Error::NotDynkin(g.arms.clone()));
    }
    let n = g.vertex_count();
    let mut seen: BTreeSet<IntVector> = (0..n).map(|v| g.simple_root(v)).collect();
    let mut queue: VecDeque<IntVector> = seen.iter().cloned().collect();
    while let Some(x) = queue.pop_front() {
        for v in 0..n {
            let y = g.reflect(&x, v);
            if y.is_positive() && seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    Ok(seen)
}

/// All non-negative, nonzero vectors with entries `<= bound` and `q(x) = 1`.
/// Valid for any star graph; on Dynkin graphs with a large enough bound this is
/// the positive root set.
pub fn roots_by_scan(g: &StarGraph, bound: i64) -> BTreeSet<IntVector> {
    let n = g.vertex_count();
    let mut out = BTreeSet::new();
    let mut x = vec![0i64; n];
    loop {
        let squares: i64 = x.iter().map(|c| c * c).sum();
        let cross: i64 = g.edges.iter().map(|&(u, w)| x[u] * x[w]).sum();
        if squares - cross == 1 {
            // q = 1 already excludes the zero vector
            out.insert(IntVector(x.clone()));
        }
        // odometer increment
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            if x[i] < bound {
                x[i] += 1;
                break;
            }
            x[i] = 0;
            i += 1;
        }
    }
}

/// Coordinate bound for the exhaustive scan: the largest coefficient of the
/// highest root is 6 (on E8), and roots of two-arm stars are 0/1 vectors.
pub fn scan_bound(g: &StarGraph) -> i64 {
    if g.arms.len() <= 2 {
        2
    } else {
        6
    }
}

/// Scans above this size are skipped in `positive_roots`.
const SCAN_LIMIT: u64 = 10_000_000;

fn scan_size(g: &StarGraph) -> u64 {
    let b = scan_bound(g) as u64 + 1;
    b.checked_pow(g.vertex_count() as u32).unwrap_or(u64::MAX)
}

type RootCache = Mutex<HashMap<Vec<usize>, Arc<BTreeSet<IntVector>>>>;

fn root_cache() -> &'static RootCache {
    static CACHE: OnceLock<RootCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Positive roots of a Dynkin star. Computed by reflection closure; when the
/// exhaustive scan is affordable it is run too and the two sets must agree.
/// Results are memoized per arm list.
pub fn positive_roots(g: &StarGraph) -> Result<BTreeSet<IntVector>> {
    Ok(cached_positive_roots(g)?.as_ref().clone())
}

fn cached_positive_roots(g: &StarGraph) -> Result<Arc<BTreeSet<IntVector>>> {
    if let Some(hit) = root_cache().lock().unwrap().get(&g.arms) {
        return Ok(hit.clone());
    }
    let roots = Arc::new(cross_checked_roots(g)?);
    root_cache()
        .lock()
        .unwrap()
        .insert(g.arms.clone(), roots.clone());
    Ok(roots)
}

pub fn positive_root_count(p: &PrimitivePoset) -> Result<usize> {
    Ok(cached_positive_roots(&star_graph(p))?.len())
}

fn cross_checked_roots(g: &StarGraph) -> Result<BTreeSet<IntVector>> {
    let closure = positive_roots_by_reflection(g)?;
    if scan_size(g) <= SCAN_LIMIT {
        let scan = roots_by_scan(g, scan_bound(g));
        assert_eq!(
            scan, closure,
            "scan and reflection closure disagree on arms {:?}",
            g.arms
        );
    }
    Ok(closure)
}

/// Membership in the classification list `(k)`, `(k1,k2)`, `(k,1,1)`,
/// `(2,2,1)`, `(3,2,1)`, `(4,2,1)` (branch order irrelevant).
pub fn in_finite_type_list(p: &PrimitivePoset) -> bool {
    let mut b = p.branches().to_vec();
    b.sort_unstable_by(|a, c| c.cmp(a));
    matches!(
        b.as_slice(),
        [_] | [_, _] | [_, 1, 1] | [2, 2, 1] | [3, 2, 1] | [4, 2, 1]
    )
}

/// Finite representation type. Decided from the classification list and
/// cross-checked against the Dynkin criterion of the star graph.
pub fn is_finite_type(p: &PrimitivePoset) -> bool {
    let listed = in_finite_type_list(p);
    let dynkin = star_graph(p).is_dynkin();
    assert_eq!(listed, dynkin, "classification mismatch for {p}");
    listed
}

/// Positive roots of the star graph that are chain-monotone, as dimension
/// vectors sorted by `d0` then lexicographically.
pub fn enumerate_indec_dims(p: &PrimitivePoset) -> Result<Vec<DimVector>> {
    if !is_finite_type(p) {
        return Err(Error::FiniteTypeRequired(p.branches().to_vec()));
    }
    let g = star_graph(p);
    let roots = cached_positive_roots(&g)?;
    Ok(monotone_dims(&g, roots.iter()))
}

/// Chain-monotone members of `roots`, sorted.
pub fn monotone_dims<'a, I: IntoIterator<Item = &'a IntVector>>(
    g: &StarGraph,
    roots: I,
) -> Vec<DimVector> {
    let mut dims: Vec<DimVector> = roots
        .into_iter()
        .filter_map(|x| g.to_dim(x))
        .filter(DimVector::is_admissible)
        .collect();
    dims.sort_by_key(DimVector::sort_key);
    dims
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poset(b: &[usize]) -> PrimitivePoset {
        PrimitivePoset::new(b.to_vec()).unwrap()
    }

    #[test]
    fn star_graph_shapes() {
        assert_eq!(star_graph(&poset(&[1, 1, 1])).vertex_count(), 4);
        let e6 = star_graph(&poset(&[2, 2, 1]));
        assert_eq!(e6.vertex_count(), 6);
        assert_eq!(e6.arm_vertex_counts(), vec![3, 3, 2]);
        assert_eq!(e6.edges().len(), 5);
        assert_eq!(star_graph(&poset(&[4, 2, 1])).vertex_count(), 8);
    }

    #[test]
    fn tits_form_examples() {
        let d4 = star_graph(&poset(&[1, 1, 1]));
        assert_eq!(tits_form(&d4, &IntVector(vec![1, 0, 0, 0])), Ok(1));
        let e6 = star_graph(&poset(&[2, 2, 1]));
        assert_eq!(tits_form(&e6, &IntVector(vec![3, 1, 2, 1, 2, 2])), Ok(1));
        assert_eq!(tits_form(&e6, &IntVector(vec![0; 6])), Ok(0));
        assert!(matches!(
            tits_form(&e6, &IntVector(vec![0; 4])),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn non_dynkin_roots_are_rejected() {
        let g = star_graph(&poset(&[1, 1, 1, 1]));
        assert!(matches!(positive_roots(&g), Err(Error::NotDynkin(_))));
    }

    #[test]
    fn classification_examples() {
        assert!(is_finite_type(&poset(&[4, 2, 1])));
        assert!(is_finite_type(&poset(&[1, 2, 4])));
        assert!(is_finite_type(&poset(&[7, 1, 1])));
        assert!(is_finite_type(&poset(&[9, 4])));
        assert!(!is_finite_type(&poset(&[5, 2, 1])));
        assert!(!is_finite_type(&poset(&[1, 1, 1, 1])));
        assert!(!is_finite_type(&poset(&[2, 2, 2])));
        assert!(!is_finite_type(&poset(&[3, 3, 2])));
        assert!(matches!(
            enumerate_indec_dims(&poset(&[2, 2, 2])),
            Err(Error::FiniteTypeRequired(_))
        ));
    }

    #[test]
    fn small_enumerations() {
        let dims = enumerate_indec_dims(&poset(&[1, 1, 1])).unwrap();
        assert_eq!(dims.len(), 9);
        assert_eq!(dims[0].to_string(), "0;0;0;1");
        assert_eq!(dims[8].to_string(), "1;1;1;2");
        let dims = enumerate_indec_dims(&poset(&[2, 1, 1])).unwrap();
        assert_eq!(dims.len(), 15);
        assert_eq!(dims.last().unwrap().to_string(), "1,2;1;1;2");
        // a single chain of length k has k+1 one-dimensional indecomposables
        assert_eq!(enumerate_indec_dims(&poset(&[3])).unwrap().len(), 4);
    }
}
