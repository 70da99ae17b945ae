//! Kochen-Specker colorability over finite ray sets: the exact orthogonality
//! graph, its complete bases (maximal-size cliques), a backtracking search
//! with unit propagation for {0,1} colorings, an independent verifier, a
//! parity-based uncolorability certificate, bounded enumeration of all
//! colorings, and the Yu-Oh inequality gap between quantum and classical
//! bounds.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{check_dim, inner, Scalar, Vect};
use crate::lattice::Ray;

/// A finite set of labelled rays in a fixed dimension. Labels are unique and
/// no two rays are parallel.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RaySet {
    dim: usize,
    labels: Vec<String>,
    vectors: Vec<Vect>,
}

impl RaySet {
    pub fn new(dim: usize, rays: Vec<(String, Vect)>) -> Result<RaySet> {
        check_dim(dim)?;
        if rays.is_empty() {
            return Err(Error::domain("ray set must be nonempty"));
        }
        let mut labels = Vec::with_capacity(rays.len());
        let mut vectors = Vec::with_capacity(rays.len());
        let mut spans: Vec<Ray> = Vec::with_capacity(rays.len());
        for (label, v) in rays {
            if label.is_empty() {
                return Err(Error::domain("ray labels must be nonempty"));
            }
            if labels.contains(&label) {
                return Err(Error::domain(format!("duplicate ray label {label:?}")));
            }
            if v.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.dim(),
                });
            }
            let span = Ray::new(&v)?;
            if let Some(pos) = spans.iter().position(|s| *s == span) {
                return Err(Error::domain(format!(
                    "rays {:?} and {label:?} are parallel",
                    labels[pos]
                )));
            }
            labels.push(label);
            vectors.push(v);
            spans.push(span);
        }
        Ok(RaySet {
            dim,
            labels,
            vectors,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vector(&self, i: usize) -> &Vect {
        &self.vectors[i]
    }

    pub fn vectors(&self) -> &[Vect] {
        &self.vectors
    }

    pub fn to_file(&self) -> RaySetFile {
        RaySetFile {
            dim: self.dim,
            rays: self
                .labels
                .iter()
                .zip(&self.vectors)
                .map(|(label, v)| RayEntryFile {
                    label: label.clone(),
                    vector: v.entries().iter().map(|s| s.to_string()).collect(),
                })
                .collect(),
        }
    }

    pub fn from_file(f: &RaySetFile) -> Result<RaySet> {
        check_dim(f.dim)?;
        let rays = f
            .rays
            .iter()
            .map(|entry| {
                let refs: Vec<&str> = entry.vector.iter().map(|s| s.as_str()).collect();
                Ok((entry.label.clone(), Vect::parse(&refs)?))
            })
            .collect::<Result<Vec<_>>>()?;
        RaySet::new(f.dim, rays)
    }
}

/// Interchange form for ray sets.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RaySetFile {
    pub dim: usize,
    pub rays: Vec<RayEntryFile>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RayEntryFile {
    pub label: String,
    pub vector: Vec<String>,
}

/// A colorability problem: the ray set with its exact orthogonality edges
/// (index pairs `i < j`) and complete bases (orthogonal cliques of size equal
/// to the dimension), both in ascending lexicographic order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Problem {
    pub rays: RaySet,
    pub edges: Vec<(usize, usize)>,
    pub bases: Vec<Vec<usize>>,
}

/// Builds the orthogonality graph and its complete bases from exact inner
/// products.
pub fn build_problem(rays: &RaySet) -> Problem {
    let n = rays.len();
    let mut adjacent = vec![vec![false; n]; n];
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let p = inner(rays.vector(i), rays.vector(j)).expect("ray set dims agree");
            if p.is_zero() {
                adjacent[i][j] = true;
                adjacent[j][i] = true;
                edges.push((i, j));
            }
        }
    }
    let mut bases = Vec::new();
    let mut clique = Vec::new();
    extend_cliques(&adjacent, rays.dim(), 0, &mut clique, &mut bases);
    Problem {
        rays: rays.clone(),
        edges,
        bases,
    }
}

fn extend_cliques(
    adjacent: &[Vec<bool>],
    size: usize,
    start: usize,
    clique: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if clique.len() == size {
        out.push(clique.clone());
        return;
    }
    for cand in start..adjacent.len() {
        if clique.iter().all(|&c| adjacent[c][cand]) {
            clique.push(cand);
            extend_cliques(adjacent, size, cand + 1, clique, out);
            clique.pop();
        }
    }
}

/// Outcome of the colorability search.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SolveReport {
    pub satisfiable: bool,
    pub coloring: Option<Vec<bool>>,
    pub nodes_explored: u64,
}

/// A defect in a proposed coloring.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ColoringViolation {
    /// Both endpoints of an orthogonality edge are colored 1.
    EdgeBothTrue { i: usize, j: usize },
    /// A complete basis whose number of 1-colored members is not exactly 1.
    BasisCount { basis: usize, count: usize },
}

struct KsSearch<'a> {
    problem: &'a Problem,
    adjacency: Vec<Vec<usize>>,
    ray_bases: Vec<Vec<usize>>,
    values: Vec<Option<bool>>,
    trail: Vec<usize>,
    nodes: u64,
}

impl<'a> KsSearch<'a> {
    fn new(problem: &'a Problem) -> KsSearch<'a> {
        let n = problem.rays.len();
        let mut adjacency = vec![Vec::new(); n];
        for &(i, j) in &problem.edges {
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
        let mut ray_bases = vec![Vec::new(); n];
        for (b, basis) in problem.bases.iter().enumerate() {
            for &m in basis {
                ray_bases[m].push(b);
            }
        }
        KsSearch {
            problem,
            adjacency,
            ray_bases,
            values: vec![None; n],
            trail: Vec::new(),
            nodes: 0,
        }
    }

    fn assign(&mut self, i: usize, val: bool) -> bool {
        match self.values[i] {
            Some(v) => v == val,
            None => {
                self.values[i] = Some(val);
                self.trail.push(i);
                true
            }
        }
    }

    /// Unit propagation: a 1 forces its neighbors to 0; a basis with no 1 and
    /// a single unassigned member forces that member to 1; a basis of all 0s
    /// is a conflict.
    fn propagate(&mut self, mut head: usize) -> bool {
        while head < self.trail.len() {
            let i = self.trail[head];
            head += 1;
            if self.values[i] == Some(true) {
                for k in 0..self.adjacency[i].len() {
                    let n = self.adjacency[i][k];
                    if !self.assign(n, false) {
                        return false;
                    }
                }
            } else {
                for k in 0..self.ray_bases[i].len() {
                    let b = self.ray_bases[i][k];
                    let mut true_seen = false;
                    let mut unassigned = Vec::new();
                    for &m in &self.problem.bases[b] {
                        match self.values[m] {
                            Some(true) => true_seen = true,
                            Some(false) => {}
                            None => unassigned.push(m),
                        }
                    }
                    if true_seen {
                        continue;
                    }
                    match unassigned[..] {
                        [] => return false,
                        [m] => {
                            if !self.assign(m, true) {
                                return false;
                            }
                        }
                        _ => {}
                    }
                }
            }
        }
        true
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let i = self.trail.pop().unwrap();
            self.values[i] = None;
        }
    }

    /// Depth-first search over rays in ascending index order, trying 1 before
    /// 0. The callback receives each complete valid coloring and returns
    /// `true` to stop the search; `dfs` reports whether it was stopped.
    fn dfs(&mut self, on_solution: &mut impl FnMut(&[bool]) -> bool) -> bool {
        self.nodes += 1;
        let next = (0..self.values.len()).find(|&i| self.values[i].is_none());
        let i = match next {
            Some(i) => i,
            None => {
                let coloring: Vec<bool> =
                    self.values.iter().map(|v| v.unwrap()).collect();
                return on_solution(&coloring);
            }
        };
        for val in [true, false] {
            let mark = self.trail.len();
            if self.assign(i, val) && self.propagate(mark) && self.dfs(on_solution) {
                return true;
            }
            self.undo_to(mark);
        }
        false
    }
}

/// Searches for a {0,1} coloring in which no two orthogonal rays are both 1
/// and every complete basis has exactly one 1. Deterministic: rays are
/// decided in ascending index order, 1 before 0.
pub fn solve(problem: &Problem) -> SolveReport {
    let mut search = KsSearch::new(problem);
    let mut found: Option<Vec<bool>> = None;
    search.dfs(&mut |coloring| {
        found = Some(coloring.to_vec());
        true
    });
    SolveReport {
        satisfiable: found.is_some(),
        coloring: found,
        nodes_explored: search.nodes,
    }
}

/// Checks a proposed coloring against the edge and basis rules directly,
/// independent of the search.
pub fn verify_coloring(problem: &Problem, coloring: &[bool]) -> Result<Vec<ColoringViolation>> {
    if coloring.len() != problem.rays.len() {
        return Err(Error::DimensionMismatch {
            expected: problem.rays.len(),
            found: coloring.len(),
        });
    }
    let mut violations = Vec::new();
    for &(i, j) in &problem.edges {
        if coloring[i] && coloring[j] {
            violations.push(ColoringViolation::EdgeBothTrue { i, j });
        }
    }
    for (b, basis) in problem.bases.iter().enumerate() {
        let count = basis.iter().filter(|&&m| coloring[m]).count();
        if count != 1 {
            violations.push(ColoringViolation::BasisCount { basis: b, count });
        }
    }
    Ok(violations)
}

/// Parity certificate of uncolorability: if every ray occurs in an even
/// number of complete bases and the number of bases is odd, then no coloring
/// exists, because the 1s summed over all bases would be both even and equal
/// to the odd basis count.
pub fn check_parity_certificate(problem: &Problem) -> bool {
    let mut occurrences = vec![0usize; problem.rays.len()];
    for basis in &problem.bases {
        for &m in basis {
            occurrences[m] += 1;
        }
    }
    occurrences.iter().all(|&c| c % 2 == 0) && problem.bases.len() % 2 == 1
}

/// All valid colorings found up to `cap`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EnumerationReport {
    pub colorings: Vec<Vec<bool>>,
    /// True when the search space was exhausted, so `colorings` is complete.
    pub complete: bool,
}

/// Enumerates valid colorings in the deterministic search order, stopping
/// after `cap` of them.
pub fn enumerate_colorings(problem: &Problem, cap: usize) -> EnumerationReport {
    let mut search = KsSearch::new(problem);
    let mut colorings = Vec::new();
    let mut complete = true;
    search.dfs(&mut |coloring| {
        if colorings.len() == cap {
            complete = false;
            return true;
        }
        colorings.push(coloring.to_vec());
        false
    });
    EnumerationReport {
        colorings,
        complete,
    }
}

/// Exhaustive classical maximum and exact quantum value of the Yu-Oh
/// functional over the 13-ray set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct YuOhGap {
    pub classical_max: Scalar,
    pub quantum_value: Scalar,
}

/// Evaluates the Yu-Oh functional `sum_i A_i - (1/4) sum_{i,j} G_ij A_i A_j`,
/// where `G` is the adjacency matrix of the orthogonality graph (the double
/// sum visits each edge in both orders, weighting each unordered edge by
/// 1/2).
///
/// The classical maximum ranges exhaustively over all assignments of +/-1 to
/// the rays. The quantum value substitutes `A_i = I - 2 P_i` with `P_i` the
/// projector onto the i-th ray and takes expectations in the state `psi`; for
/// orthogonal pairs the product expectation is `1 - 2 p_i - 2 p_j` with `p_i`
/// the outcome probability of ray i. For the Yu-Oh rays the quantum value is
/// the same for every state and exceeds the classical maximum.
pub fn yu_oh_gap(problem: &Problem, psi: &Vect) -> Result<YuOhGap> {
    let n = problem.rays.len();
    if n != 13 || problem.edges.len() != 24 {
        return Err(Error::domain(format!(
            "expected the 13-ray set with its 24-edge orthogonality graph, found {n} rays and {} edges",
            problem.edges.len()
        )));
    }
    if psi.dim() != problem.rays.dim() {
        return Err(Error::DimensionMismatch {
            expected: problem.rays.dim(),
            found: psi.dim(),
        });
    }
    let norm = inner(psi, psi)?;
    if norm.is_zero() {
        return Err(Error::ZeroVector);
    }
    // Classical maximum over +/-1 assignments; twice the value
    // 2*sum(a_i) - sum_edges(a_i a_j) is an integer.
    let mut best_doubled = i64::MIN;
    for mask in 0u32..(1u32 << n) {
        let sign = |i: usize| -> i64 {
            if mask & (1 << i) != 0 {
                1
            } else {
                -1
            }
        };
        let mut doubled: i64 = (0..n).map(|i| 2 * sign(i)).sum();
        for &(i, j) in &problem.edges {
            doubled -= sign(i) * sign(j);
        }
        best_doubled = best_doubled.max(doubled);
    }
    // Quantum value from exact outcome probabilities in psi.
    let probabilities: Vec<Scalar> = (0..n)
        .map(|i| {
            let v = problem.rays.vector(i);
            let overlap = inner(v, psi)?;
            let squared = &overlap.conj() * &overlap;
            squared.div(&(&inner(v, v)? * &norm))
        })
        .collect::<Result<Vec<_>>>()?;
    let one = Scalar::one();
    let two = Scalar::from_int(2);
    let half = Scalar::from_ratio(1, 2)?;
    let mut quantum = Scalar::zero();
    for p in &probabilities {
        quantum = &quantum + &(&one - &(&two * p));
    }
    for &(i, j) in &problem.edges {
        let pair = &(&one - &(&two * &probabilities[i])) - &(&two * &probabilities[j]);
        quantum = &quantum - &(&half * &pair);
    }
    Ok(YuOhGap {
        classical_max: Scalar::from_ratio(best_doubled, 2)?,
        quantum_value: quantum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rayset(dim: usize, rays: &[(&str, &[&str])]) -> RaySet {
        RaySet::new(
            dim,
            rays.iter()
                .map(|(label, entries)| (label.to_string(), Vect::parse(entries).unwrap()))
                .collect(),
        )
        .unwrap()
    }

    fn axes3() -> RaySet {
        rayset(
            3,
            &[
                ("x", &["1", "0", "0"]),
                ("y", &["0", "1", "0"]),
                ("z", &["0", "0", "1"]),
            ],
        )
    }

    #[test]
    fn rayset_validation() {
        assert!(RaySet::new(3, vec![]).is_err());
        // Parallel rays.
        assert!(RaySet::new(
            2,
            vec![
                ("a".into(), Vect::parse(&["1", "0"]).unwrap()),
                ("b".into(), Vect::parse(&["2", "0"]).unwrap()),
            ],
        )
        .is_err());
        // Duplicate label.
        assert!(RaySet::new(
            2,
            vec![
                ("a".into(), Vect::parse(&["1", "0"]).unwrap()),
                ("a".into(), Vect::parse(&["0", "1"]).unwrap()),
            ],
        )
        .is_err());
        // Zero vector.
        assert!(RaySet::new(
            2,
            vec![("a".into(), Vect::parse(&["0", "0"]).unwrap())],
        )
        .is_err());
    }

    #[test]
    fn single_basis_graph_and_colorings() {
        let problem = build_problem(&axes3());
        assert_eq!(problem.edges, vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(problem.bases, vec![vec![0, 1, 2]]);
        let report = solve(&problem);
        assert!(report.satisfiable);
        let coloring = report.coloring.unwrap();
        assert_eq!(verify_coloring(&problem, &coloring).unwrap(), vec![]);
        // First solution in order: ray 0 colored 1 forces the rest to 0.
        assert_eq!(coloring, vec![true, false, false]);
        let all = enumerate_colorings(&problem, 100);
        assert!(all.complete);
        assert_eq!(all.colorings.len(), 3);
        assert!(!check_parity_certificate(&problem));
    }

    #[test]
    fn two_disjoint_bases_have_nine_colorings() {
        // The second basis shares no orthogonality with the axes: every
        // coordinate of its vectors is nonzero.
        let rays = rayset(
            3,
            &[
                ("x", &["1", "0", "0"]),
                ("y", &["0", "1", "0"]),
                ("z", &["0", "0", "1"]),
                ("u", &["1", "2", "3"]),
                ("v", &["5", "-1", "-1"]),
                ("w", &["1", "16", "-11"]),
            ],
        );
        let problem = build_problem(&rays);
        assert_eq!(problem.edges.len(), 6);
        assert_eq!(problem.bases, vec![vec![0, 1, 2], vec![3, 4, 5]]);
        let all = enumerate_colorings(&problem, 100);
        assert!(all.complete);
        assert_eq!(all.colorings.len(), 9);
    }

    #[test]
    fn enumeration_cap_is_respected() {
        let problem = build_problem(&axes3());
        let capped = enumerate_colorings(&problem, 2);
        assert!(!capped.complete);
        assert_eq!(capped.colorings.len(), 2);
        // Cap equal to the count still reports completeness.
        let exact = enumerate_colorings(&problem, 3);
        assert!(exact.complete);
        assert_eq!(exact.colorings.len(), 3);
    }

    #[test]
    fn verify_rejects_bad_colorings() {
        let problem = build_problem(&axes3());
        let violations = verify_coloring(&problem, &[true, true, false]).unwrap();
        assert!(violations
            .iter()
            .any(|v| matches!(v, ColoringViolation::EdgeBothTrue { i: 0, j: 1 })));
        assert!(violations
            .iter()
            .any(|v| matches!(v, ColoringViolation::BasisCount { basis: 0, count: 2 })));
        let none_true = verify_coloring(&problem, &[false, false, false]).unwrap();
        assert_eq!(
            none_true,
            vec![ColoringViolation::BasisCount { basis: 0, count: 0 }]
        );
        assert!(verify_coloring(&problem, &[true]).is_err());
    }

    #[test]
    fn solve_is_deterministic() {
        let problem = build_problem(&axes3());
        let a = solve(&problem);
        let b = solve(&problem);
        assert_eq!(a, b);
    }

    #[test]
    fn functional_rejects_wrong_ray_count() {
        let problem = build_problem(&axes3());
        let psi = Vect::parse(&["1", "0", "0"]).unwrap();
        assert!(yu_oh_gap(&problem, &psi).is_err());
    }

    #[test]
    fn rayset_file_roundtrip() {
        let rays = axes3();
        let json = serde_json::to_string(&rays.to_file()).unwrap();
        let back = RaySet::from_file(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back, rays);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        /// The search agrees with exhaustive enumeration, and any coloring it
        /// returns passes the independent verifier.
        #[test]
        fn solver_agrees_with_enumeration(
            seeds in proptest::collection::vec((-2i64..=2, -2i64..=2, -2i64..=2), 3..6)
        ) {
            let mut rays = Vec::new();
            for (idx, (a, b, c)) in seeds.iter().enumerate() {
                if *a == 0 && *b == 0 && *c == 0 {
                    continue;
                }
                let v = Vect::new(vec![
                    Scalar::from_int(*a),
                    Scalar::from_int(*b),
                    Scalar::from_int(*c),
                ]);
                rays.push((format!("r{idx}"), v));
            }
            // Drop rays parallel to an earlier one.
            let mut kept: Vec<(String, Vect)> = Vec::new();
            for (label, v) in rays {
                let ray = Ray::new(&v).unwrap();
                if kept.iter().all(|(_, u)| Ray::new(u).unwrap() != ray) {
                    kept.push((label, v));
                }
            }
            prop_assume!(!kept.is_empty());
            let rayset = RaySet::new(3, kept).unwrap();
            let problem = build_problem(&rayset);
            let report = solve(&problem);
            let all = enumerate_colorings(&problem, 1 << rayset.len());
            prop_assert!(all.complete);
            prop_assert_eq!(report.satisfiable, !all.colorings.is_empty());
            if let Some(coloring) = report.coloring {
                prop_assert_eq!(verify_coloring(&problem, &coloring).unwrap(), vec![]);
                prop_assert_eq!(Some(&coloring), all.colorings.first());
            }
            for coloring in &all.colorings {
                prop_assert_eq!(verify_coloring(&problem, coloring).unwrap(), vec![]);
            }
        }
    }
}
