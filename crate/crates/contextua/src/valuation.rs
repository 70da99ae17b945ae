//! Truth valuation of subspace propositions in a pure state: the three-valued
//! classification rule, exact Born probabilities, and checks for two-valued
//! homomorphisms on finite subspace families.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{check_dim, Mat, Scalar, Vect};
use crate::lattice::{Ray, Subspace};

/// Verdict of the eigenspace truth rule: a proposition is true when the state
/// ray lies inside it, false when the ray lies in its orthocomplement, and
/// indeterminate otherwise.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TruthValue {
    True,
    False,
    Indeterminate,
}

impl TruthValue {
    pub fn as_str(&self) -> &'static str {
        match self {
            TruthValue::True => "true",
            TruthValue::False => "false",
            TruthValue::Indeterminate => "indeterminate",
        }
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Pure state, stored as the ray its vector spans.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct State {
    ray: Ray,
}

impl State {
    pub fn new(v: &Vect) -> Result<State> {
        Ok(State { ray: Ray::new(v)? })
    }

    pub fn ray(&self) -> &Ray {
        &self.ray
    }

    pub fn dim(&self) -> usize {
        self.ray.dim()
    }

    /// Canonical direction vector.
    pub fn vector(&self) -> Vect {
        self.ray.vector()
    }

    /// Rank-1 density projector.
    pub fn density(&self) -> Mat {
        self.ray.as_subspace().to_projector()
    }

    pub fn to_file(&self) -> StateFile {
        StateFile {
            vector: self.vector().entries().to_vec(),
        }
    }

    pub fn from_file(f: &StateFile) -> Result<State> {
        check_dim(f.vector.len())?;
        State::new(&Vect::new(f.vector.clone()))
    }
}

/// Interchange form: the state vector as canonical scalar strings.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub vector: Vec<Scalar>,
}

/// Three-valued classification of a proposition in a state.
pub fn classify(s: &State, p: &Subspace) -> Result<TruthValue> {
    let ray = s.ray.as_subspace();
    if ray.leq(p)? {
        Ok(TruthValue::True)
    } else if ray.leq(&p.ortho())? {
        Ok(TruthValue::False)
    } else {
        Ok(TruthValue::Indeterminate)
    }
}

/// Exact Born probability `trace(D P)` of the proposition in the state.
pub fn born_probability(s: &State, p: &Subspace) -> Result<Scalar> {
    if s.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            found: p.dim(),
        });
    }
    let value = s.density().mul(&p.to_projector())?.trace()?;
    debug_assert!(value.is_real());
    Ok(value)
}

/// A total {0,1} assignment on a finite family of subspaces.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Assignment {
    pairs: Vec<(Subspace, bool)>,
}

impl Assignment {
    pub fn new(pairs: Vec<(Subspace, bool)>) -> Assignment {
        Assignment { pairs }
    }

    pub fn from_fn(family: &[Subspace], f: impl Fn(&Subspace) -> bool) -> Assignment {
        Assignment {
            pairs: family.iter().map(|s| (s.clone(), f(s))).collect(),
        }
    }

    pub fn get(&self, s: &Subspace) -> Option<bool> {
        self.pairs.iter().find(|(t, _)| t == s).map(|(_, v)| *v)
    }

    pub fn pairs(&self) -> &[(Subspace, bool)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ViolationKind {
    Meet,
    Join,
    Ortho,
    Zero,
    Full,
}

/// A homomorphism rule broken by an assignment; indices refer to positions in
/// the checked family.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Violation {
    pub kind: ViolationKind,
    pub lhs: usize,
    pub rhs: Option<usize>,
    pub result: Option<usize>,
}

fn family_values(family: &[Subspace], h: &Assignment) -> Result<Vec<bool>> {
    if let Some(first) = family.first() {
        for s in family {
            if s.dim() != first.dim() {
                return Err(Error::DimensionMismatch {
                    expected: first.dim(),
                    found: s.dim(),
                });
            }
        }
    }
    for (i, s) in family.iter().enumerate() {
        if family[..i].contains(s) {
            return Err(Error::domain("family contains duplicate members"));
        }
    }
    family
        .iter()
        .map(|s| {
            h.get(s)
                .ok_or_else(|| Error::domain("assignment is not total on the family"))
        })
        .collect()
}

/// Checks the two-valued homomorphism rules on a finite family: wherever a
/// meet, join, or orthocomplement of members again lies in the family the
/// assignment must respect min, max, and complement, and the zero and full
/// subspaces must map to 0 and 1 when present. Returns all violations.
pub fn check_homomorphism(family: &[Subspace], h: &Assignment) -> Result<Vec<Violation>> {
    let values = family_values(family, h)?;
    let find = |s: &Subspace| family.iter().position(|t| t == s);
    let mut violations = Vec::new();
    for i in 0..family.len() {
        if family[i].is_zero() && values[i] {
            violations.push(Violation {
                kind: ViolationKind::Zero,
                lhs: i,
                rhs: None,
                result: None,
            });
        }
        if family[i].is_full() && !values[i] {
            violations.push(Violation {
                kind: ViolationKind::Full,
                lhs: i,
                rhs: None,
                result: None,
            });
        }
        if let Some(j) = find(&family[i].ortho()) {
            if j > i && values[j] != !values[i] {
                violations.push(Violation {
                    kind: ViolationKind::Ortho,
                    lhs: i,
                    rhs: None,
                    result: Some(j),
                });
            }
        }
        for j in (i + 1)..family.len() {
            if let Some(m) = find(&family[i].meet(&family[j])?) {
                if values[m] != (values[i] && values[j]) {
                    violations.push(Violation {
                        kind: ViolationKind::Meet,
                        lhs: i,
                        rhs: Some(j),
                        result: Some(m),
                    });
                }
            }
            if let Some(m) = find(&family[i].join(&family[j])?) {
                if values[m] != (values[i] || values[j]) {
                    violations.push(Violation {
                        kind: ViolationKind::Join,
                        lhs: i,
                        rhs: Some(j),
                        result: Some(m),
                    });
                }
            }
        }
    }
    Ok(violations)
}

#[derive(Clone, Copy)]
enum Cons {
    // h[b] = 1 - h[a]
    Ortho(usize, usize),
    // h[m] = h[a] & h[b]
    Meet(usize, usize, usize),
    // h[m] = h[a] | h[b]
    Join(usize, usize, usize),
}

struct Search {
    values: Vec<Option<bool>>,
    trail: Vec<usize>,
    cons: Vec<Cons>,
    occurs: Vec<Vec<usize>>,
}

impl Search {
    fn assign(&mut self, var: usize, val: bool, queue: &mut VecDeque<usize>) -> bool {
        match self.values[var] {
            Some(v) => v == val,
            None => {
                self.values[var] = Some(val);
                self.trail.push(var);
                queue.push_back(var);
                true
            }
        }
    }

    fn propagate(&mut self, mut queue: VecDeque<usize>) -> bool {
        while let Some(var) = queue.pop_front() {
            for idx in self.occurs[var].clone() {
                let ok = match self.cons[idx] {
                    Cons::Ortho(a, b) => match (self.values[a], self.values[b]) {
                        (Some(x), None) => self.assign(b, !x, &mut queue),
                        (None, Some(y)) => self.assign(a, !y, &mut queue),
                        (Some(x), Some(y)) => x != y,
                        (None, None) => true,
                    },
                    Cons::Meet(a, b, m) => self.propagate_and(a, b, m, &mut queue),
                    Cons::Join(a, b, m) => self.propagate_or(a, b, m, &mut queue),
                };
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    fn propagate_and(&mut self, a: usize, b: usize, m: usize, queue: &mut VecDeque<usize>) -> bool {
        let (va, vb, vm) = (self.values[a], self.values[b], self.values[m]);
        match (va, vb, vm) {
            (Some(x), Some(y), _) => match vm {
                Some(z) => z == (x && y),
                None => self.assign(m, x && y, queue),
            },
            (_, _, Some(true)) => self.assign(a, true, queue) && self.assign(b, true, queue),
            (Some(true), None, Some(false)) => self.assign(b, false, queue),
            (None, Some(true), Some(false)) => self.assign(a, false, queue),
            _ => true,
        }
    }

    fn propagate_or(&mut self, a: usize, b: usize, m: usize, queue: &mut VecDeque<usize>) -> bool {
        let (va, vb, vm) = (self.values[a], self.values[b], self.values[m]);
        match (va, vb, vm) {
            (Some(x), Some(y), _) => match vm {
                Some(z) => z == (x || y),
                None => self.assign(m, x || y, queue),
            },
            (_, _, Some(false)) => self.assign(a, false, queue) && self.assign(b, false, queue),
            (Some(false), None, Some(true)) => self.assign(b, true, queue),
            (None, Some(false), Some(true)) => self.assign(a, true, queue),
            _ => true,
        }
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let var = self.trail.pop().unwrap();
            self.values[var] = None;
        }
    }

    fn dfs(&mut self, out: &mut Vec<Vec<bool>>, limit: usize) -> bool {
        let Some(var) = self.values.iter().position(Option::is_none) else {
            out.push(self.values.iter().map(|v| v.unwrap()).collect());
            return out.len() >= limit;
        };
        for val in [true, false] {
            let mark = self.trail.len();
            let mut queue = VecDeque::new();
            if self.assign(var, val, &mut queue) && self.propagate(queue) && self.dfs(out, limit) {
                return true;
            }
            self.undo(mark);
        }
        false
    }
}

/// Complete search for every total {0,1} assignment on the family that passes
/// `check_homomorphism`, in deterministic order, stopping after `limit`
/// solutions. Uses unit propagation over the compiled meet/join/ortho
/// constraints, so it stays practical on families far too large for brute
/// force enumeration.
pub fn enumerate_homomorphisms(family: &[Subspace], limit: usize) -> Result<Vec<Assignment>> {
    let placeholder = Assignment::new(
        family
            .iter()
            .map(|s| (s.clone(), false))
            .collect::<Vec<_>>(),
    );
    family_values(family, &placeholder)?;
    if limit == 0 || family.is_empty() {
        return Ok(Vec::new());
    }
    let n = family.len();
    let find = |s: &Subspace| family.iter().position(|t| t == s);
    let mut cons = Vec::new();
    let mut fixed = Vec::new();
    for i in 0..n {
        if family[i].is_zero() {
            fixed.push((i, false));
        }
        if family[i].is_full() {
            fixed.push((i, true));
        }
        if let Some(j) = find(&family[i].ortho()) {
            if j > i {
                cons.push(Cons::Ortho(i, j));
            }
        }
        for j in (i + 1)..n {
            if let Some(m) = find(&family[i].meet(&family[j])?) {
                cons.push(Cons::Meet(i, j, m));
            }
            if let Some(m) = find(&family[i].join(&family[j])?) {
                cons.push(Cons::Join(i, j, m));
            }
        }
    }
    let mut occurs = vec![Vec::new(); n];
    for (idx, c) in cons.iter().enumerate() {
        let vars: &[usize] = match c {
            Cons::Ortho(a, b) => &[*a, *b][..],
            Cons::Meet(a, b, m) | Cons::Join(a, b, m) => &[*a, *b, *m][..],
        };
        for &v in vars {
            if !occurs[v].contains(&idx) {
                occurs[v].push(idx);
            }
        }
    }
    let mut search = Search {
        values: vec![None; n],
        trail: Vec::new(),
        cons,
        occurs,
    };
    let mut queue = VecDeque::new();
    for (var, val) in fixed {
        if !search.assign(var, val, &mut queue) {
            return Ok(Vec::new());
        }
    }
    let mut raw = Vec::new();
    if search.propagate(queue) {
        search.dfs(&mut raw, limit);
    }
    Ok(raw
        .into_iter()
        .map(|values| {
            Assignment::new(
                family
                    .iter()
                    .cloned()
                    .zip(values)
                    .collect::<Vec<(Subspace, bool)>>(),
            )
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(entries: &[&str]) -> Vect {
        Vect::parse(entries).unwrap()
    }

    fn sp(dim: usize, vectors: &[&[&str]]) -> Subspace {
        Subspace::span(dim, &vectors.iter().map(|e| v(e)).collect::<Vec<_>>()).unwrap()
    }

    fn sc(s: &str) -> Scalar {
        s.parse().unwrap()
    }

    #[test]
    fn spin_half_truth_values() {
        let up = State::new(&v(&["1", "0"])).unwrap();
        let sz_up = sp(2, &[&["1", "0"]]);
        let sz_down = sp(2, &[&["0", "1"]]);
        let sy_up = sp(2, &[&["1", "i"]]);
        assert_eq!(classify(&up, &sz_up).unwrap(), TruthValue::True);
        assert_eq!(classify(&up, &sz_down).unwrap(), TruthValue::False);
        assert_eq!(classify(&up, &sy_up).unwrap(), TruthValue::Indeterminate);
        assert_eq!(born_probability(&up, &sz_up).unwrap(), sc("1"));
        assert_eq!(born_probability(&up, &sz_down).unwrap(), sc("0"));
        assert_eq!(born_probability(&up, &sy_up).unwrap(), sc("1/2"));
    }

    #[test]
    fn diagonal_state_against_axis() {
        let s = State::new(&v(&["1", "1", "1"])).unwrap();
        let e1 = sp(3, &[&["1", "0", "0"]]);
        assert_eq!(classify(&s, &e1).unwrap(), TruthValue::Indeterminate);
        assert_eq!(born_probability(&s, &e1).unwrap(), sc("1/3"));
    }

    #[test]
    fn classify_rejects_mismatched_dims() {
        let s = State::new(&v(&["1", "0"])).unwrap();
        assert!(classify(&s, &Subspace::full(3)).is_err());
        assert!(born_probability(&s, &Subspace::full(3)).is_err());
    }

    fn boolean_family_dim2() -> Vec<Subspace> {
        vec![
            Subspace::zero(2),
            sp(2, &[&["1", "0"]]),
            sp(2, &[&["0", "1"]]),
            Subspace::full(2),
        ]
    }

    #[test]
    fn indicator_passes_homomorphism_check() {
        let fam = boolean_family_dim2();
        let x = fam[1].clone();
        let h = Assignment::from_fn(&fam, |s| x.leq(s).unwrap());
        assert_eq!(check_homomorphism(&fam, &h).unwrap(), vec![]);
    }

    #[test]
    fn double_truth_fails_homomorphism_check() {
        let fam = boolean_family_dim2();
        let h = Assignment::from_fn(&fam, |s| !s.is_zero());
        let violations = check_homomorphism(&fam, &h).unwrap();
        assert!(violations
            .iter()
            .any(|viol| viol.kind == ViolationKind::Meet));
    }

    #[test]
    fn partial_assignment_is_rejected() {
        let fam = boolean_family_dim2();
        let h = Assignment::new(vec![(fam[0].clone(), false)]);
        assert!(check_homomorphism(&fam, &h).is_err());
    }

    #[test]
    fn enumeration_finds_exactly_the_two_indicators() {
        let fam = boolean_family_dim2();
        let found = enumerate_homomorphisms(&fam, 64).unwrap();
        assert_eq!(found.len(), 2);
        for h in &found {
            assert_eq!(check_homomorphism(&fam, h).unwrap(), vec![]);
        }
        // Exactly one axis is assigned 1 in each solution.
        let ones: Vec<usize> = found
            .iter()
            .map(|h| h.pairs().iter().filter(|(_, v)| *v).count())
            .collect();
        assert_eq!(ones, vec![2, 2]);
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        (-2i64..=2, -1i64..=1).prop_map(|(a, c)| {
            &Scalar::from_int(a) + &(&Scalar::from_int(c) * &Scalar::i())
        })
    }

    fn arb_subspace(dim: usize) -> impl Strategy<Value = Subspace> {
        proptest::collection::vec(proptest::collection::vec(arb_scalar(), dim), 0..=dim)
            .prop_map(move |rows| {
                let vs: Vec<Vect> = rows.into_iter().map(Vect::new).collect();
                Subspace::span(dim, &vs).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn born_probability_matches_classification(
            entries in proptest::collection::vec(arb_scalar(), 3),
            p in arb_subspace(3),
        ) {
            let vec = Vect::new(entries);
            prop_assume!(!vec.is_zero());
            let s = State::new(&vec).unwrap();
            let prob = born_probability(&s, &p).unwrap();
            prop_assert!(prob.real_sign().unwrap() >= 0);
            prop_assert!((&Scalar::one() - &prob).real_sign().unwrap() >= 0);
            match classify(&s, &p).unwrap() {
                TruthValue::True => prop_assert_eq!(prob, Scalar::one()),
                TruthValue::False => prop_assert_eq!(prob, Scalar::zero()),
                TruthValue::Indeterminate => {
                    prop_assert!(!prob.is_zero());
                    prop_assert!(prob != Scalar::one());
                }
            }
        }

        #[test]
        fn enumeration_agrees_with_brute_force(
            subs in proptest::collection::vec(arb_subspace(2), 1..=4)
        ) {
            let mut fam: Vec<Subspace> = vec![Subspace::zero(2), Subspace::full(2)];
            for s in subs {
                if !fam.contains(&s) {
                    fam.push(s);
                }
            }
            let enumerated = enumerate_homomorphisms(&fam, 1 << fam.len()).unwrap();
            let mut brute = Vec::new();
            for mask in 0u32..(1 << fam.len()) {
                let h = Assignment::new(
                    fam.iter()
                        .enumerate()
                        .map(|(i, s)| (s.clone(), mask >> i & 1 == 1))
                        .collect(),
                );
                if check_homomorphism(&fam, &h).unwrap().is_empty() {
                    brute.push(h);
                }
            }
            prop_assert_eq!(enumerated.len(), brute.len());
            for h in &enumerated {
                prop_assert!(brute.contains(h));
            }
        }
    }
}
