//! Determinate sublattices for a pure state and a measured observable: the
//! lattice-theoretic projection of the state onto the observable's
//! eigenspaces, the induced two-valued evaluators, the contextual mixed state
//! that reproduces the outcome statistics, and a bounded closure operator used
//! to probe maximality.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{check_dim, Mat, Scalar};
use crate::lattice::{Ray, Subspace, SubspaceFile};
use crate::valuation::{born_probability, State, StateFile};

/// An observable given by its spectral decomposition: distinct real
/// eigenvalues paired with mutually orthogonal eigenspaces that fill the
/// ambient space.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Observable {
    dim: usize,
    spectral: Vec<(Scalar, Subspace)>,
}

impl Observable {
    pub fn new(dim: usize, spectral: Vec<(Scalar, Subspace)>) -> Result<Observable> {
        if spectral.is_empty() {
            return Err(Error::domain("observable needs at least one eigenspace"));
        }
        let mut rank_sum = 0;
        for (i, (value, space)) in spectral.iter().enumerate() {
            if !value.is_real() {
                return Err(Error::domain(format!("eigenvalue {value} is not real")));
            }
            if space.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: space.dim(),
                });
            }
            if space.is_zero() {
                return Err(Error::domain("eigenspaces must be nonzero"));
            }
            rank_sum += space.rank();
            for (prev_value, prev_space) in &spectral[..i] {
                if prev_value == value {
                    return Err(Error::domain(format!("duplicate eigenvalue {value}")));
                }
                if !space.leq(&prev_space.ortho())? {
                    return Err(Error::domain("eigenspaces must be pairwise orthogonal"));
                }
            }
        }
        if rank_sum != dim {
            return Err(Error::domain(format!(
                "eigenspace ranks sum to {rank_sum}, expected {dim}"
            )));
        }
        Ok(Observable { dim, spectral })
    }

    /// The trivial observable whose sole eigenspace is the full space.
    pub fn identity(dim: usize) -> Observable {
        Observable {
            dim,
            spectral: vec![(Scalar::one(), Subspace::full(dim))],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spectral(&self) -> &[(Scalar, Subspace)] {
        &self.spectral
    }

    pub fn to_file(&self) -> ObservableFile {
        ObservableFile {
            dim: self.dim,
            spectral: self
                .spectral
                .iter()
                .map(|(value, space)| SpectralComponentFile {
                    eigenvalue: value.clone(),
                    eigenspace: space.to_file(),
                })
                .collect(),
        }
    }

    pub fn from_file(f: &ObservableFile) -> Result<Observable> {
        check_dim(f.dim)?;
        let spectral = f
            .spectral
            .iter()
            .map(|c| Ok((c.eigenvalue.clone(), Subspace::from_file(&c.eigenspace)?)))
            .collect::<Result<Vec<_>>>()?;
        Observable::new(f.dim, spectral)
    }
}

/// A measurement context: a pure state together with an observable on the
/// same space.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Context {
    state: State,
    observable: Observable,
}

impl Context {
    pub fn new(state: State, observable: Observable) -> Result<Context> {
        if state.dim() != observable.dim() {
            return Err(Error::DimensionMismatch {
                expected: state.dim(),
                found: observable.dim(),
            });
        }
        Ok(Context { state, observable })
    }

    pub fn state(&self) -> &State {
        &self.state
    }

    pub fn observable(&self) -> &Observable {
        &self.observable
    }

    /// Projects the state ray into each eigenspace through the lattice
    /// formula `(D v A_perp) ^ A`, keeping the nonzero results. Each kept ray
    /// carries the exact outcome weight `trace(D P_A)`; the weights of the
    /// kept rays always sum to 1 because dropped eigenspaces carry weight 0.
    pub fn project(&self) -> DeterminateSublattice {
        let d = self.state.ray().as_subspace();
        let mut rays = Vec::new();
        let mut weights = Vec::new();
        for (_, a) in &self.observable.spectral {
            let projected = d
                .join(&a.ortho())
                .and_then(|j| j.meet(a))
                .expect("context dimensions agree");
            if projected.is_zero() {
                continue;
            }
            let ray = Ray::from_subspace(projected)
                .expect("projecting a ray into an eigenspace has rank at most 1");
            let weight = born_probability(&self.state, a).expect("context dimensions agree");
            rays.push(ray);
            weights.push(weight);
        }
        DeterminateSublattice {
            state: self.state.clone(),
            rays,
            weights,
        }
    }

    pub fn to_file(&self) -> ContextFile {
        ContextFile {
            state: self.state.to_file(),
            observable: self.observable.to_file(),
        }
    }

    pub fn from_file(f: &ContextFile) -> Result<Context> {
        Context::new(State::from_file(&f.state)?, Observable::from_file(&f.observable)?)
    }
}

/// The sublattice of propositions made determinate by a context: those that
/// either contain or are orthogonal to every projected ray.
///
/// The `k` projected rays index the two-valued evaluators exposed by
/// [`DeterminateSublattice::homomorphism`]. For ambient dimension at least 3
/// these are, generically, all the two-valued homomorphisms of the member
/// family; in dimension 2, or when the unprojected remainder is a single ray,
/// further total assignments exist on the ambient lattice, so the evaluator
/// count is a lower bound there.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DeterminateSublattice {
    state: State,
    rays: Vec<Ray>,
    weights: Vec<Scalar>,
}

impl DeterminateSublattice {
    pub fn state(&self) -> &State {
        &self.state
    }

    pub fn dim(&self) -> usize {
        self.state.dim()
    }

    /// Number of projected rays.
    pub fn k(&self) -> usize {
        self.rays.len()
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    /// Exact outcome weights aligned with `rays`; they sum to 1.
    pub fn weights(&self) -> &[Scalar] {
        &self.weights
    }

    /// Membership test: the proposition must contain or be orthogonal to
    /// every projected ray.
    pub fn is_member(&self, p: &Subspace) -> Result<bool> {
        let p_ortho = p.ortho();
        for ray in &self.rays {
            let r = ray.as_subspace();
            if !(r.leq(p)? || r.leq(&p_ortho)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The i-th two-valued evaluator (0-based), which maps a member to 1
    /// exactly when it contains the i-th projected ray.
    pub fn homomorphism(&self, index: usize) -> Result<Homomorphism<'_>> {
        if index >= self.k() {
            return Err(Error::domain(format!(
                "evaluator index {index} out of range for k = {}",
                self.k()
            )));
        }
        Ok(Homomorphism {
            sublattice: self,
            index,
        })
    }

    pub fn homomorphisms(&self) -> Vec<Homomorphism<'_>> {
        (0..self.k())
            .map(|index| Homomorphism {
                sublattice: self,
                index,
            })
            .collect()
    }

    /// The mixed state assembled from the projected rays and their weights.
    pub fn contextual_state(&self) -> ContextualState {
        ContextualState {
            dim: self.dim(),
            mixture: self
                .rays
                .iter()
                .zip(&self.weights)
                .map(|(ray, w)| (w.clone(), ray.as_subspace().to_projector()))
                .collect(),
        }
    }
}

/// Determinate sublattice of a bare state: the special case of a context
/// whose observable is the identity, yielding a single projected ray.
pub fn dvn_sublattice(state: &State) -> DeterminateSublattice {
    Context::new(state.clone(), Observable::identity(state.dim()))
        .expect("identity observable matches the state dimension")
        .project()
}

/// A two-valued evaluator on the members of a determinate sublattice.
#[derive(Clone, Copy, Debug)]
pub struct Homomorphism<'a> {
    sublattice: &'a DeterminateSublattice,
    index: usize,
}

impl Homomorphism<'_> {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn ray(&self) -> &Ray {
        &self.sublattice.rays[self.index]
    }

    /// Evaluates a member proposition; rejects non-members.
    pub fn evaluate(&self, p: &Subspace) -> Result<bool> {
        if !self.sublattice.is_member(p)? {
            return Err(Error::domain(
                "proposition is not a member of the determinate sublattice",
            ));
        }
        self.ray().as_subspace().leq(p)
    }
}

/// Convex mixture of rank-1 projectors with exact weights.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ContextualState {
    dim: usize,
    mixture: Vec<(Scalar, Mat)>,
}

impl ContextualState {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mixture(&self) -> &[(Scalar, Mat)] {
        &self.mixture
    }

    /// The density matrix: the weighted sum of the mixture projectors.
    pub fn density(&self) -> Mat {
        let mut acc = Mat::zero(self.dim, self.dim);
        for (w, p) in &self.mixture {
            acc = acc.add(&p.scale(w)).expect("mixture dimensions agree");
        }
        acc
    }

    /// Probability the mixture assigns to a proposition, `trace(D_A P)`.
    pub fn probability(&self, p: &Subspace) -> Result<Scalar> {
        if p.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: p.dim(),
            });
        }
        self.density().mul(&p.to_projector())?.trace()
    }
}

/// Result of closing a seed family under meet, join, and orthocomplement.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Closure {
    pub family: Vec<Subspace>,
    pub reached_fixpoint: bool,
}

/// Iteratively closes the seed under meet, join, and orthocomplement, in
/// deterministic worklist order, stopping once the family would exceed `cap`
/// elements. `reached_fixpoint` reports whether the returned family is
/// actually closed.
pub fn bounded_closure(seed: &[Subspace], cap: usize) -> Result<Closure> {
    if let Some(first) = seed.first() {
        for s in seed {
            if s.dim() != first.dim() {
                return Err(Error::DimensionMismatch {
                    expected: first.dim(),
                    found: s.dim(),
                });
            }
        }
    }
    let mut family: Vec<Subspace> = Vec::new();
    for s in seed {
        if !family.contains(s) {
            if family.len() >= cap {
                return Ok(Closure {
                    family,
                    reached_fixpoint: false,
                });
            }
            family.push(s.clone());
        }
    }
    let mut idx = 0;
    while idx < family.len() {
        let mut pending = vec![family[idx].ortho()];
        for j in 0..idx {
            pending.push(family[j].meet(&family[idx])?);
            pending.push(family[j].join(&family[idx])?);
        }
        for candidate in pending {
            if family.contains(&candidate) {
                continue;
            }
            if family.len() >= cap {
                return Ok(Closure {
                    family,
                    reached_fixpoint: false,
                });
            }
            family.push(candidate);
        }
        idx += 1;
    }
    Ok(Closure {
        family,
        reached_fixpoint: true,
    })
}

/// Interchange form for observables.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservableFile {
    pub dim: usize,
    pub spectral: Vec<SpectralComponentFile>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralComponentFile {
    pub eigenvalue: Scalar,
    pub eigenspace: SubspaceFile,
}

/// Interchange form for contexts.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContextFile {
    pub state: StateFile,
    pub observable: ObservableFile,
}
