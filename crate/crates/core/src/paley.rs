//! Paley graphs `P_q` and their one- and two-vertex-deleted relatives,
//! with checked certificates for self-complementarity and transitivity.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::field::{prime_power, FieldError, FiniteField};
use crate::graph::Graph;
use crate::iso::{is_automorphism, is_complementing, vertex_orbit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PaleyVariant {
    /// `P_q`
    Full,
    /// `Q_{q-1}`: vertex 0 deleted.
    OneDeleted,
    /// `Z^(a)_{q-2}`: vertices 0 and the least nonzero square deleted.
    TwoDeletedAdjacent,
    /// `Z^(n)_{q-2}`: vertices 0 and the least nonsquare deleted.
    TwoDeletedNonadjacent,
}

impl PaleyVariant {
    pub fn vertex_count(self, q: usize) -> usize {
        match self {
            PaleyVariant::Full => q,
            PaleyVariant::OneDeleted => q - 1,
            PaleyVariant::TwoDeletedAdjacent | PaleyVariant::TwoDeletedNonadjacent => q - 2,
        }
    }
}

impl fmt::Display for PaleyVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PaleyVariant::Full => "full",
            PaleyVariant::OneDeleted => "one-deleted",
            PaleyVariant::TwoDeletedAdjacent => "two-deleted-adjacent",
            PaleyVariant::TwoDeletedNonadjacent => "two-deleted-nonadjacent",
        })
    }
}

/// The field underlying `P_q`, after checking `q` is an odd prime power
/// with `q = 1 (mod 4)`.
pub fn paley_field(q: u64) -> Result<FiniteField, FieldError> {
    if q % 2 == 0 {
        return Err(FieldError::EvenOrder(q as usize));
    }
    let (p, k) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
    if q % 4 != 1 {
        return Err(FieldError::NotOneModFour(q));
    }
    FiniteField::new(p, k)
}

fn paley_on(field: &FiniteField) -> Graph {
    Graph::from_fn(field.order(), |u, v| {
        field.is_nonzero_square(field.sub(u, v))
    })
}

/// `P_q`: field elements adjacent when their difference is a nonzero square.
pub fn paley_graph(q: u64) -> Result<Graph, FieldError> {
    let field = paley_field(q)?;
    Ok(paley_on(&field).with_label(format!("P{q}")))
}

fn least_nonsquare(field: &FiniteField) -> usize {
    (1..field.order())
        .find(|&x| !field.is_nonzero_square(x))
        .expect("odd field has nonsquares")
}

fn least_square(field: &FiniteField) -> usize {
    (1..field.order())
        .find(|&x| field.is_nonzero_square(x))
        .expect("1 is a square")
}

pub fn paley_family(q: u64, variant: PaleyVariant) -> Result<Graph, FieldError> {
    let field = paley_field(q)?;
    let p = paley_on(&field);
    let (removed, label) = match variant {
        PaleyVariant::Full => return Ok(p.with_label(format!("P{q}"))),
        PaleyVariant::OneDeleted => (vec![0], format!("Q{}", q - 1)),
        PaleyVariant::TwoDeletedAdjacent => {
            (vec![0, least_square(&field)], format!("Z{}a", q - 2))
        }
        PaleyVariant::TwoDeletedNonadjacent => {
            (vec![0, least_nonsquare(&field)], format!("Z{}n", q - 2))
        }
    };
    let g = p
        .delete_vertices(&removed)
        .expect("deleted vertices are field elements");
    Ok(g.with_label(label))
}

/// Complementing permutation `x -> t x` of `P_q` for the least nonsquare
/// `t`, and its restriction to `Q_{q-1}` (it fixes 0).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelfComplementWitness {
    pub q: u64,
    pub multiplier: usize,
    pub full: Vec<usize>,
    pub one_deleted: Vec<usize>,
}

pub fn self_complement_witness(q: u64) -> Result<SelfComplementWitness, FieldError> {
    let field = paley_field(q)?;
    let g = paley_on(&field);
    let t = least_nonsquare(&field);
    let full: Vec<usize> = (0..field.order()).map(|x| field.mul(t, x)).collect();
    if !is_complementing(&g, &full) {
        return Err(FieldError::VerificationFailed(format!(
            "x -> {t}x does not complement P{q}"
        )));
    }
    debug_assert_eq!(full[0], 0);
    let one_deleted: Vec<usize> = full[1..].iter().map(|&x| x - 1).collect();
    let qg = g.delete_vertices(&[0]).expect("vertex 0 exists");
    if !is_complementing(&qg, &one_deleted) {
        return Err(FieldError::VerificationFailed(format!(
            "restricted witness does not complement Q{}",
            q - 1
        )));
    }
    Ok(SelfComplementWitness {
        q,
        multiplier: t,
        full,
        one_deleted,
    })
}

/// Automorphisms of `P_q` (translation by 1, multiplication by a generator
/// of the squares) together with the checked orbit sizes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitivityCertificate {
    pub q: u64,
    pub square_generator: usize,
    pub generators: Vec<Vec<usize>>,
    pub vertex_orbit: usize,
    pub edge_orbit: usize,
}

pub fn transitivity_generators(q: u64) -> Result<TransitivityCertificate, FieldError> {
    let field = paley_field(q)?;
    let g = paley_on(&field);
    let n = field.order();
    let half = (n - 1) / 2;
    let s = (1..n)
        .find(|&x| field.is_nonzero_square(x) && field.element_order(x) == half)
        .expect("the squares form a cyclic group");
    let translate: Vec<usize> = (0..n).map(|x| field.add(x, 1)).collect();
    let scale: Vec<usize> = (0..n).map(|x| field.mul(s, x)).collect();
    let generators = vec![translate, scale];
    for gen in &generators {
        if !is_automorphism(&g, gen) {
            return Err(FieldError::VerificationFailed(format!(
                "generator is not an automorphism of P{q}"
            )));
        }
    }
    let vertex_orbit = vertex_orbit(n, 0, &generators).count();
    let edge_orbit = edge_orbit(&generators, (0, least_square(&field))).len();
    if vertex_orbit != n || edge_orbit != g.edge_count() {
        return Err(FieldError::VerificationFailed(format!(
            "orbits on P{q}: {vertex_orbit} vertices, {edge_orbit} edges"
        )));
    }
    Ok(TransitivityCertificate {
        q,
        square_generator: s,
        generators,
        vertex_orbit,
        edge_orbit,
    })
}

/// Orbit of an unordered pair under a permutation group given by generators.
pub fn edge_orbit(generators: &[Vec<usize>], start: (usize, usize)) -> BTreeSet<(usize, usize)> {
    let norm = |(a, b): (usize, usize)| (a.min(b), a.max(b));
    let mut orbit = BTreeSet::new();
    orbit.insert(norm(start));
    let mut stack = vec![norm(start)];
    while let Some((a, b)) = stack.pop() {
        for gen in generators {
            let e = norm((gen[a], gen[b]));
            if orbit.insert(e) {
                stack.push(e);
            }
        }
    }
    orbit
}
