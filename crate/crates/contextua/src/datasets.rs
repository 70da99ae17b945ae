//! Embedded registry of named ray sets and worked examples, transcribed from
//! their cited sources and validated structurally (ray, edge, and basis
//! counts) every time an entry is fetched.

use serde::{Deserialize, Serialize};

use crate::bubclifton::{Context, Observable, ObservableFile};
use crate::error::{Error, Result};
use crate::exactlin::{Scalar, Vect};
use crate::kscheck::{build_problem, RaySet};
use crate::lattice::{Ray, Subspace};
use crate::valuation::{State, StateFile};

/// The typed value carried by a dataset entry.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DatasetPayload {
    RaySet(RaySet),
    Context(Context),
    SpinExample(SpinExample),
}

/// The standard spin-1/2 example: the z-up state together with the spectral
/// pairs of the z- and y-spin observables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SpinExample {
    pub state: State,
    pub s_z: Observable,
    pub s_y: Observable,
}

impl SpinExample {
    pub fn to_file(&self) -> SpinExampleFile {
        SpinExampleFile {
            state: self.state.to_file(),
            s_z: self.s_z.to_file(),
            s_y: self.s_y.to_file(),
        }
    }
}

/// Interchange form for the spin example.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpinExampleFile {
    pub state: StateFile,
    pub s_z: ObservableFile,
    pub s_y: ObservableFile,
}

/// A named, validated dataset with a note on where its numbers come from.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DatasetEntry {
    pub name: &'static str,
    pub provenance: &'static str,
    pub payload: DatasetPayload,
}

impl DatasetEntry {
    pub fn kind(&self) -> &'static str {
        match self.payload {
            DatasetPayload::RaySet(_) => "rayset",
            DatasetPayload::Context(_) => "context",
            DatasetPayload::SpinExample(_) => "spin-example",
        }
    }
}

/// Registered dataset names in sorted order.
pub fn names() -> Vec<&'static str> {
    vec![
        "bc-axes",
        "bc-degenerate",
        "cabello18",
        "peres33",
        "spin-half",
        "yuoh13",
    ]
}

/// Fetches a dataset by name, re-running its structural validation.
pub fn get(name: &str) -> Result<DatasetEntry> {
    match name {
        "bc-axes" => bc_axes(),
        "bc-degenerate" => bc_degenerate(),
        "cabello18" => cabello18(),
        "peres33" => peres33(),
        "spin-half" => spin_half(),
        "yuoh13" => yuoh13(),
        _ => Err(Error::UnknownName(name.to_string())),
    }
}

/// Expected structural counts for an embedded ray set.
struct Fingerprint {
    dim: usize,
    rays: usize,
    edges: usize,
    bases: usize,
}

fn checked_rayset(name: &str, rays: Vec<(String, Vect)>, expected: &Fingerprint) -> Result<RaySet> {
    let rayset = RaySet::new(expected.dim, rays)?;
    let problem = build_problem(&rayset);
    let found = Fingerprint {
        dim: rayset.dim(),
        rays: rayset.len(),
        edges: problem.edges.len(),
        bases: problem.bases.len(),
    };
    for (what, expected, found) in [
        ("dimension", expected.dim, found.dim),
        ("ray count", expected.rays, found.rays),
        ("edge count", expected.edges, found.edges),
        ("basis count", expected.bases, found.bases),
    ] {
        if expected != found {
            return Err(Error::domain(format!(
                "dataset {name}: {what} is {found}, expected {expected}"
            )));
        }
    }
    Ok(rayset)
}

fn labelled(entries: &[&str]) -> Result<(String, Vect)> {
    let v = Vect::parse(entries)?;
    Ok((entries.join(","), v))
}

/// The 9 complete bases of the 18-ray, dimension-4 uncolorability proof.
/// Every ray occurs in exactly two bases, so the parity certificate applies.
const CABELLO18_BASES: [[[&str; 4]; 4]; 9] = [
    [
        ["0", "0", "0", "1"],
        ["0", "0", "1", "0"],
        ["1", "1", "0", "0"],
        ["1", "-1", "0", "0"],
    ],
    [
        ["0", "0", "0", "1"],
        ["0", "1", "0", "0"],
        ["1", "0", "1", "0"],
        ["1", "0", "-1", "0"],
    ],
    [
        ["1", "-1", "1", "-1"],
        ["1", "-1", "-1", "1"],
        ["1", "1", "0", "0"],
        ["0", "0", "1", "1"],
    ],
    [
        ["1", "-1", "1", "-1"],
        ["1", "1", "1", "1"],
        ["1", "0", "-1", "0"],
        ["0", "1", "0", "-1"],
    ],
    [
        ["0", "0", "1", "0"],
        ["0", "1", "0", "0"],
        ["1", "0", "0", "1"],
        ["1", "0", "0", "-1"],
    ],
    [
        ["1", "-1", "-1", "1"],
        ["1", "1", "1", "1"],
        ["1", "0", "0", "-1"],
        ["0", "1", "-1", "0"],
    ],
    [
        ["1", "1", "-1", "1"],
        ["1", "1", "1", "-1"],
        ["1", "-1", "0", "0"],
        ["0", "0", "1", "1"],
    ],
    [
        ["1", "1", "-1", "1"],
        ["-1", "1", "1", "1"],
        ["1", "0", "1", "0"],
        ["0", "1", "0", "-1"],
    ],
    [
        ["1", "1", "1", "-1"],
        ["-1", "1", "1", "1"],
        ["1", "0", "0", "1"],
        ["0", "1", "-1", "0"],
    ],
];

fn cabello18() -> Result<DatasetEntry> {
    let mut rays: Vec<(String, Vect)> = Vec::new();
    let mut spans: Vec<Ray> = Vec::new();
    for basis in &CABELLO18_BASES {
        for entries in basis {
            let (label, v) = labelled(entries)?;
            let span = Ray::new(&v)?;
            if !spans.contains(&span) {
                spans.push(span);
                rays.push((label, v));
            }
        }
    }
    let rayset = checked_rayset(
        "cabello18",
        rays,
        &Fingerprint {
            dim: 4,
            rays: 18,
            edges: 63,
            bases: 9,
        },
    )?;
    Ok(DatasetEntry {
        name: "cabello18",
        provenance: "Transcribed from Cabello, Estebaranz, and Garcia-Alcaine, \
                     \"Bell-Kochen-Specker theorem: A proof with 18 vectors\" (1996): \
                     18 rays in dimension 4 forming 9 complete bases, each ray in \
                     exactly two bases.",
        payload: DatasetPayload::RaySet(rayset),
    })
}

/// Seed vectors whose coordinate permutations and sign flips generate the
/// 33-ray, dimension-3 set.
const PERES33_SEEDS: [[&str; 3]; 4] = [
    ["0", "0", "1"],
    ["0", "1", "1"],
    ["0", "1", "r2"],
    ["1", "1", "r2"],
];

fn peres33_rays() -> Result<Vec<(String, Vect)>> {
    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let minus_one = -&Scalar::one();
    let mut rays: Vec<(String, Vect)> = Vec::new();
    let mut spans: Vec<Ray> = Vec::new();
    for seed in &PERES33_SEEDS {
        let base: Vec<Scalar> = seed
            .iter()
            .map(|s| s.parse())
            .collect::<std::result::Result<_, _>>()?;
        for perm in &PERMS {
            for mask in 0u8..8 {
                let entries: Vec<Scalar> = (0..3)
                    .map(|k| {
                        let e = base[perm[k]].clone();
                        if mask & (1 << k) != 0 {
                            -&e
                        } else {
                            e
                        }
                    })
                    .collect();
                let mut v = Vect::new(entries);
                let first = v
                    .entries()
                    .iter()
                    .find(|e| !e.is_zero())
                    .expect("seed vectors are nonzero")
                    .clone();
                if first.real_sign()? < 0 {
                    v = v.scale(&minus_one);
                }
                let span = Ray::new(&v)?;
                if !spans.contains(&span) {
                    spans.push(span);
                    let label = v
                        .entries()
                        .iter()
                        .map(|e| e.to_string())
                        .collect::<Vec<_>>()
                        .join(",");
                    rays.push((label, v));
                }
            }
        }
    }
    Ok(rays)
}

fn peres33() -> Result<DatasetEntry> {
    let rayset = checked_rayset(
        "peres33",
        peres33_rays()?,
        &Fingerprint {
            dim: 3,
            rays: 33,
            edges: 72,
            bases: 16,
        },
    )?;
    Ok(DatasetEntry {
        name: "peres33",
        provenance: "Generated from Peres, \"Two simple proofs of the Kochen-Specker \
                     theorem\" (1991): coordinate permutations and sign flips of \
                     (0,0,1), (0,1,1), (0,1,sqrt2), and (1,1,sqrt2), deduplicated \
                     projectively to 33 rays in dimension 3.",
        payload: DatasetPayload::RaySet(rayset),
    })
}

/// The 13 rays of the state-independent inequality set: the coordinate axes,
/// the six axis-plane diagonals, and the four cube diagonals.
const YUOH13_VECTORS: [[&str; 3]; 13] = [
    ["1", "0", "0"],
    ["0", "1", "0"],
    ["0", "0", "1"],
    ["0", "1", "-1"],
    ["0", "1", "1"],
    ["1", "0", "-1"],
    ["1", "0", "1"],
    ["1", "-1", "0"],
    ["1", "1", "0"],
    ["1", "1", "1"],
    ["-1", "1", "1"],
    ["1", "-1", "1"],
    ["1", "1", "-1"],
];

fn yuoh13() -> Result<DatasetEntry> {
    let rays = YUOH13_VECTORS
        .iter()
        .map(|entries| labelled(entries))
        .collect::<Result<Vec<_>>>()?;
    let rayset = checked_rayset(
        "yuoh13",
        rays,
        &Fingerprint {
            dim: 3,
            rays: 13,
            edges: 24,
            bases: 4,
        },
    )?;
    Ok(DatasetEntry {
        name: "yuoh13",
        provenance: "Transcribed from Yu and Oh, \"State-independent proof of the \
                     Kochen-Specker theorem with 13 rays\" (2012): 13 rays in \
                     dimension 3 with integer entries.",
        payload: DatasetPayload::RaySet(rayset),
    })
}

fn axis(dim: usize, k: usize) -> Subspace {
    let entries: Vec<Scalar> = (0..dim)
        .map(|i| if i == k { Scalar::one() } else { Scalar::zero() })
        .collect();
    Subspace::span(dim, &[Vect::new(entries)]).expect("axis vector is nonzero")
}

fn bc_axes() -> Result<DatasetEntry> {
    let state = State::new(&Vect::parse(&["1", "1", "1"])?)?;
    let observable = Observable::new(
        3,
        vec![
            (Scalar::from_int(1), axis(3, 0)),
            (Scalar::from_int(2), axis(3, 1)),
            (Scalar::from_int(3), axis(3, 2)),
        ],
    )?;
    Ok(DatasetEntry {
        name: "bc-axes",
        provenance: "Worked example: the state (1,1,1) with a nondegenerate \
                     three-outcome observable along the coordinate axes; all three \
                     projected rays survive with weight 1/3 each.",
        payload: DatasetPayload::Context(Context::new(state, observable)?),
    })
}

fn bc_degenerate() -> Result<DatasetEntry> {
    let state = State::new(&Vect::parse(&["1", "0", "1"])?)?;
    let plane = Subspace::span(
        3,
        &[Vect::parse(&["1", "0", "0"])?, Vect::parse(&["0", "1", "0"])?],
    )?;
    let observable = Observable::new(
        3,
        vec![(Scalar::from_int(1), plane), (Scalar::from_int(2), axis(3, 2))],
    )?;
    Ok(DatasetEntry {
        name: "bc-degenerate",
        provenance: "Worked example: the state (1,0,1) with a degenerate observable \
                     splitting the space into a coordinate plane and an axis; the \
                     projection into the plane collapses to a single ray.",
        payload: DatasetPayload::Context(Context::new(state, observable)?),
    })
}

fn spin_half() -> Result<DatasetEntry> {
    let state = State::new(&Vect::parse(&["1", "0"])?)?;
    let s_z = Observable::new(
        2,
        vec![
            (Scalar::from_ratio(1, 2)?, axis(2, 0)),
            (Scalar::from_ratio(-1, 2)?, axis(2, 1)),
        ],
    )?;
    let s_y = Observable::new(
        2,
        vec![
            (
                Scalar::from_ratio(1, 2)?,
                Subspace::span(2, &[Vect::parse(&["1", "i"])?])?,
            ),
            (
                Scalar::from_ratio(-1, 2)?,
                Subspace::span(2, &[Vect::parse(&["1", "-i"])?])?,
            ),
        ],
    )?;
    Ok(DatasetEntry {
        name: "spin-half",
        provenance: "Standard spin-1/2 example: the z-up state with the spectral \
                     pairs of the z- and y-spin observables; the y eigenvectors are \
                     (1, i) and (1, -i).",
        payload: DatasetPayload::SpinExample(SpinExample { state, s_z, s_y }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kscheck::{
        check_parity_certificate, enumerate_colorings, solve, verify_coloring, yu_oh_gap,
    };

    fn rayset(name: &str) -> RaySet {
        match get(name).unwrap().payload {
            DatasetPayload::RaySet(rs) => rs,
            _ => panic!("expected a ray set"),
        }
    }

    fn context(name: &str) -> Context {
        match get(name).unwrap().payload {
            DatasetPayload::Context(c) => c,
            _ => panic!("expected a context"),
        }
    }

    #[test]
    fn names_are_sorted_and_all_load() {
        let names = names();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
        for name in names {
            let entry = get(name).unwrap();
            assert_eq!(entry.name, name);
            assert!(!entry.provenance.is_empty());
        }
    }

    #[test]
    fn unknown_name_is_rejected() {
        assert!(matches!(get("nosuch"), Err(Error::UnknownName(_))));
    }

    #[test]
    fn registry_is_deterministic() {
        for name in names() {
            assert_eq!(get(name).unwrap(), get(name).unwrap());
        }
    }

    #[test]
    fn cabello18_certificate_and_verdict() {
        let problem = build_problem(&rayset("cabello18"));
        assert_eq!(problem.bases.len(), 9);
        let mut occurrences = vec![0usize; 18];
        for basis in &problem.bases {
            assert_eq!(basis.len(), 4);
            for &m in basis {
                occurrences[m] += 1;
            }
        }
        assert!(occurrences.iter().all(|&c| c == 2));
        assert!(check_parity_certificate(&problem));
        let report = solve(&problem);
        assert!(!report.satisfiable);
    }

    #[test]
    fn peres33_is_uncolorable() {
        let problem = build_problem(&rayset("peres33"));
        assert!(!check_parity_certificate(&problem));
        let report = solve(&problem);
        assert!(!report.satisfiable);
    }

    #[test]
    fn yuoh13_is_colorable_with_frozen_count() {
        let problem = build_problem(&rayset("yuoh13"));
        let report = solve(&problem);
        assert!(report.satisfiable);
        let coloring = report.coloring.unwrap();
        assert_eq!(verify_coloring(&problem, &coloring).unwrap(), vec![]);
        let all = enumerate_colorings(&problem, 1000);
        assert!(all.complete);
        assert_eq!(all.colorings.len(), 24);
    }

    #[test]
    fn yuoh13_gap_is_state_independent() {
        let problem = build_problem(&rayset("yuoh13"));
        let e1 = Vect::parse(&["1", "0", "0"]).unwrap();
        let gap = yu_oh_gap(&problem, &e1).unwrap();
        assert_eq!(gap.quantum_value, "25/3".parse().unwrap());
        assert_eq!(gap.classical_max, "8".parse().unwrap());
        for psi in [
            Vect::parse(&["0", "1", "0"]).unwrap(),
            Vect::parse(&["0", "0", "1"]).unwrap(),
            Vect::parse(&["1", "2", "3"]).unwrap(),
            Vect::parse(&["1", "i", "r2"]).unwrap(),
        ] {
            let other = yu_oh_gap(&problem, &psi).unwrap();
            assert_eq!(other.quantum_value, gap.quantum_value);
            assert_eq!(other.classical_max, gap.classical_max);
        }
        assert!(gap.quantum_value.cmp_real(&gap.classical_max).unwrap()
            == std::cmp::Ordering::Greater);
    }

    #[test]
    fn spin_half_matches_pauli_eigenrelations() {
        let spin = match get("spin-half").unwrap().payload {
            DatasetPayload::SpinExample(s) => s,
            _ => panic!("expected the spin example"),
        };
        assert_eq!(spin.state.vector(), Vect::parse(&["1", "0"]).unwrap());
        // Independent oracle: the 2x2 spin matrices themselves.
        let s_z = crate::exactlin::Mat::from_rows(&[
            Vect::parse(&["1/2", "0"]).unwrap(),
            Vect::parse(&["0", "-1/2"]).unwrap(),
        ])
        .unwrap();
        let s_y = crate::exactlin::Mat::from_rows(&[
            Vect::parse(&["0", "-1/2i"]).unwrap(),
            Vect::parse(&["1/2i", "0"]).unwrap(),
        ])
        .unwrap();
        for (matrix, observable) in [(&s_z, &spin.s_z), (&s_y, &spin.s_y)] {
            for (eigenvalue, eigenspace) in observable.spectral() {
                for v in eigenspace.basis_vectors() {
                    let lhs = matrix.mul_vec(&v).unwrap();
                    let rhs = v.scale(eigenvalue);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn worked_contexts_project_as_recorded() {
        let dl = context("bc-axes").project();
        assert_eq!(dl.k(), 3);
        assert_eq!(
            dl.weights(),
            &["1/3".parse().unwrap(), "1/3".parse().unwrap(), "1/3".parse().unwrap()]
        );
        let dl = context("bc-degenerate").project();
        assert_eq!(dl.k(), 2);
        assert_eq!(dl.rays()[0].as_subspace(), &axis(3, 0));
        assert_eq!(dl.rays()[1].as_subspace(), &axis(3, 2));
        assert_eq!(
            dl.weights(),
            &["1/2".parse().unwrap(), "1/2".parse().unwrap()]
        );
    }
}
