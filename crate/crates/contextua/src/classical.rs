//! Classical baseline: a finite phase space whose properties are subsets,
//! where truth is total characteristic-function membership and every point
//! induces a Boolean two-valued homomorphism.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finite labeled phase space.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PhaseSpace {
    points: Vec<String>,
}

impl PhaseSpace {
    pub fn new(points: Vec<String>) -> Result<PhaseSpace> {
        if points.is_empty() {
            return Err(Error::domain("phase space needs at least one point"));
        }
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(Error::domain(format!("duplicate point label {p:?}")));
            }
        }
        Ok(PhaseSpace { points })
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point_index(&self, label: &str) -> Result<usize> {
        self.points
            .iter()
            .position(|p| p == label)
            .ok_or_else(|| Error::UnknownName(label.to_string()))
    }

    pub fn property_from_labels(&self, labels: &[String]) -> Result<ClassicalProperty> {
        let mut subset = BTreeSet::new();
        for l in labels {
            subset.insert(self.point_index(l)?);
        }
        Ok(ClassicalProperty { subset })
    }

    pub fn empty_property(&self) -> ClassicalProperty {
        ClassicalProperty {
            subset: BTreeSet::new(),
        }
    }

    pub fn full_property(&self) -> ClassicalProperty {
        ClassicalProperty {
            subset: (0..self.len()).collect(),
        }
    }

    pub fn complement(&self, p: &ClassicalProperty) -> ClassicalProperty {
        ClassicalProperty {
            subset: (0..self.len()).filter(|i| !p.subset.contains(i)).collect(),
        }
    }

    /// Every subset of points, in mask order; the Boolean algebra of the
    /// space.
    pub fn power_set(&self) -> Vec<ClassicalProperty> {
        (0u64..(1 << self.len()))
            .map(|mask| ClassicalProperty {
                subset: (0..self.len()).filter(|i| mask >> i & 1 == 1).collect(),
            })
            .collect()
    }
}

/// A property as a subset of phase-space points.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct ClassicalProperty {
    subset: BTreeSet<usize>,
}

impl ClassicalProperty {
    pub fn contains(&self, point: usize) -> bool {
        self.subset.contains(&point)
    }

    pub fn intersect(&self, other: &ClassicalProperty) -> ClassicalProperty {
        ClassicalProperty {
            subset: self.subset.intersection(&other.subset).copied().collect(),
        }
    }

    pub fn union(&self, other: &ClassicalProperty) -> ClassicalProperty {
        ClassicalProperty {
            subset: self.subset.union(&other.subset).copied().collect(),
        }
    }

    pub fn labels(&self, space: &PhaseSpace) -> Vec<String> {
        self.subset
            .iter()
            .map(|&i| space.points()[i].clone())
            .collect()
    }
}

/// Characteristic-function truth: total, never indeterminate.
pub fn classical_truth(space: &PhaseSpace, point: &str, prop: &ClassicalProperty) -> Result<bool> {
    Ok(prop.contains(space.point_index(point)?))
}

/// The truth values a single point induces across a family of properties.
pub fn point_valuation(
    space: &PhaseSpace,
    point: &str,
    family: &[ClassicalProperty],
) -> Result<Vec<bool>> {
    let idx = space.point_index(point)?;
    Ok(family.iter().map(|p| p.contains(idx)).collect())
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BooleanViolationKind {
    Intersection,
    Union,
    Complement,
    Empty,
    Full,
}

/// A Boolean homomorphism rule broken by a valuation; indices refer to
/// positions in the checked family.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct BooleanViolation {
    pub kind: BooleanViolationKind,
    pub lhs: usize,
    pub rhs: Option<usize>,
    pub result: Option<usize>,
}

/// Boolean analogue of the subspace homomorphism check: meets are
/// intersections, joins are unions, complements are set complements.
pub fn check_boolean_homomorphism(
    space: &PhaseSpace,
    family: &[ClassicalProperty],
    values: &[bool],
) -> Result<Vec<BooleanViolation>> {
    if family.len() != values.len() {
        return Err(Error::domain("valuation is not total on the family"));
    }
    let find = |p: &ClassicalProperty| family.iter().position(|q| q == p);
    let mut violations = Vec::new();
    for i in 0..family.len() {
        if family[i] == space.empty_property() && values[i] {
            violations.push(BooleanViolation {
                kind: BooleanViolationKind::Empty,
                lhs: i,
                rhs: None,
                result: None,
            });
        }
        if family[i] == space.full_property() && !values[i] {
            violations.push(BooleanViolation {
                kind: BooleanViolationKind::Full,
                lhs: i,
                rhs: None,
                result: None,
            });
        }
        if let Some(j) = find(&space.complement(&family[i])) {
            if j > i && values[j] != !values[i] {
                violations.push(BooleanViolation {
                    kind: BooleanViolationKind::Complement,
                    lhs: i,
                    rhs: None,
                    result: Some(j),
                });
            }
        }
        for j in (i + 1)..family.len() {
            if let Some(m) = find(&family[i].intersect(&family[j])) {
                if values[m] != (values[i] && values[j]) {
                    violations.push(BooleanViolation {
                        kind: BooleanViolationKind::Intersection,
                        lhs: i,
                        rhs: Some(j),
                        result: Some(m),
                    });
                }
            }
            if let Some(m) = find(&family[i].union(&family[j])) {
                if values[m] != (values[i] || values[j]) {
                    violations.push(BooleanViolation {
                        kind: BooleanViolationKind::Union,
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

/// Interchange form: point labels plus named properties given as label lists.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseSpaceFile {
    pub points: Vec<String>,
    pub properties: BTreeMap<String, Vec<String>>,
}

impl PhaseSpaceFile {
    pub fn load(&self) -> Result<(PhaseSpace, Vec<(String, ClassicalProperty)>)> {
        let space = PhaseSpace::new(self.points.clone())?;
        let mut props = Vec::new();
        for (name, labels) in &self.properties {
            props.push((name.clone(), space.property_from_labels(labels)?));
        }
        Ok((space, props))
    }
}
