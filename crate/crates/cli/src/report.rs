//! Versioned JSON report documents and their independent re-verification.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use orcap_core::bounds::{
    verify_bound_report, verify_gap_certificate, verify_pair_report, BoundReport, Certificate,
    GapCertificate, PairReport, BOUND_TOLERANCE,
};
use orcap_core::io::{decode_graph6, encode_graph6};
use orcap_core::props::PropertyReport;
use orcap_core::search::{odd_girth, verify_clique, verify_coloring, verify_independent_set};
use orcap_core::theta::{dual_bound, CertifiedValue};
use orcap_core::Graph;

pub const SCHEMA_VERSION: &str = "1.0";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDocument {
    pub schema_version: String,
    pub command: Vec<String>,
    pub inputs: Vec<GraphRecord>,
    pub results: Results,
    /// Witnesses for scalar results. Bound reports carry their own.
    pub certificates: Vec<Certificate>,
    /// The only part of a document allowed to differ between identical runs.
    pub timing: Timing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphRecord {
    pub id: String,
    pub label: Option<String>,
    pub n: usize,
    pub edges: usize,
    pub graph6: String,
    /// SHA-256 of the graph6 string.
    pub sha256: String,
}

impl GraphRecord {
    pub fn new(id: impl Into<String>, g: &Graph) -> Result<Self, String> {
        let graph6 = encode_graph6(g).map_err(|e| e.to_string())?;
        Ok(GraphRecord {
            id: id.into(),
            label: g.label().map(str::to_string),
            n: g.n(),
            edges: g.edge_count(),
            sha256: hex::encode(Sha256::digest(graph6.as_bytes())),
            graph6,
        })
    }

    /// Decodes the stored graph after checking the hash and counts.
    pub fn graph(&self) -> Result<Graph, String> {
        let digest = hex::encode(Sha256::digest(self.graph6.as_bytes()));
        if digest != self.sha256 {
            return Err(format!("input {}: hash mismatch", self.id));
        }
        let g = decode_graph6(self.graph6.as_bytes()).map_err(|e| format!("input {}: {e}", self.id))?;
        if g.n() != self.n || g.edge_count() != self.edges {
            return Err(format!("input {}: vertex or edge count mismatch", self.id));
        }
        Ok(match &self.label {
            Some(l) => g.with_label(l.clone()),
            None => g,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CliqueTarget {
    Clique,
    IndependentSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThetaParameter {
    Theta,
    ThetaBar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Found,
    Refuted,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Results {
    Graph {
        operation: String,
        output: GraphRecord,
    },
    Clique {
        target: CliqueTarget,
        size: usize,
        proven_optimal: bool,
        nodes_explored: u64,
    },
    Chromatic {
        lower: usize,
        upper: usize,
    },
    Theta {
        parameter: ThetaParameter,
        interval: CertifiedValue,
    },
    OddGirth {
        value: Option<usize>,
    },
    Homomorphism {
        outcome: Outcome,
    },
    Bounds {
        report: BoundReport,
    },
    Pair {
        report: PairReport,
    },
    Gap {
        certificate: GapCertificate,
    },
    Properties {
        report: PropertyReport,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Timing {
    pub total_seconds: f64,
    pub phases: Vec<Phase>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Phase {
    pub name: String,
    pub seconds: f64,
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report documents always serialize")
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let doc: ReportDocument = serde_json::from_str(text).map_err(|e| e.to_string())?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(format!("unsupported schema version {}", doc.schema_version));
        }
        Ok(doc)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifySummary {
    pub checked: usize,
    /// Certificates absent or elided, so not re-checked.
    pub unchecked: usize,
}

/// Re-verifies a document from its own contents: inputs are decoded from
/// graph6 and every embedded certificate is checked against them.
pub fn verify_document(doc: &ReportDocument) -> Result<VerifySummary, String> {
    if doc.schema_version != SCHEMA_VERSION {
        return Err(format!("unsupported schema version {}", doc.schema_version));
    }
    let inputs: Vec<Graph> = doc.inputs.iter().map(GraphRecord::graph).collect::<Result<_, _>>()?;
    let input = |i: usize| {
        inputs
            .get(i)
            .ok_or_else(|| format!("document needs at least {} input graph(s)", i + 1))
    };
    let mut summary = VerifySummary {
        checked: 0,
        unchecked: 0,
    };
    let bounds_err = |e: orcap_core::bounds::BoundsError| e.to_string();
    match &doc.results {
        Results::Graph { output, .. } => {
            output.graph()?;
            summary.checked += 1;
        }
        Results::Clique { target, size, .. } => {
            let g = input(0)?;
            let witness = clique_witness(&doc.certificates)?;
            let ok = match target {
                CliqueTarget::Clique => verify_clique(g, witness),
                CliqueTarget::IndependentSet => verify_independent_set(g, witness),
            };
            if !ok || witness.len() != *size {
                return Err("clique witness does not verify".into());
            }
            summary.checked += 1;
        }
        Results::Chromatic { upper, .. } => {
            let g = input(0)?;
            let colors = doc
                .certificates
                .iter()
                .find_map(|c| match c {
                    Certificate::Coloring { colors } => Some(colors),
                    _ => None,
                })
                .ok_or("missing colouring certificate")?;
            if !verify_coloring(g, colors, *upper) {
                return Err("colouring does not verify".into());
            }
            summary.checked += 1;
        }
        Results::Theta { parameter, interval } => {
            let g = input(0)?;
            let target = match parameter {
                ThetaParameter::Theta => g.clone(),
                ThetaParameter::ThetaBar => g.complement(),
            };
            for c in &doc.certificates {
                if let Certificate::ThetaDual { edge_weights, .. } = c {
                    match edge_weights {
                        Some(w) => {
                            let b = dual_bound(&target, w).map_err(|e| e.to_string())?;
                            if b > interval.upper + BOUND_TOLERANCE {
                                return Err(format!("dual certificate gives {b} > {}", interval.upper));
                            }
                            summary.checked += 1;
                        }
                        None => summary.unchecked += 1,
                    }
                }
            }
        }
        Results::OddGirth { value } => {
            if odd_girth(input(0)?) != *value {
                return Err("odd girth does not match recomputation".into());
            }
            summary.checked += 1;
        }
        Results::Homomorphism { outcome } => {
            let (f, g) = (input(0)?, input(1)?);
            if *outcome == Outcome::Found {
                let mapping = doc
                    .certificates
                    .iter()
                    .find_map(|c| match c {
                        Certificate::Homomorphism { mapping } => Some(mapping),
                        _ => None,
                    })
                    .ok_or("missing homomorphism certificate")?;
                if !f.is_homomorphism_to(g, mapping) {
                    return Err("homomorphism does not verify".into());
                }
                summary.checked += 1;
            } else {
                summary.unchecked += 1;
            }
        }
        Results::Bounds { report } => {
            let n = report.entries.len();
            let unchecked = verify_bound_report(input(0)?, report).map_err(bounds_err)?;
            summary.checked += n - unchecked;
            summary.unchecked += unchecked;
        }
        Results::Pair { report } => {
            let n = report.first.entries.len() + report.second.entries.len() + report.lower_candidates.len();
            let unchecked = verify_pair_report(input(0)?, input(1)?, report).map_err(bounds_err)?;
            summary.checked += n - unchecked;
            summary.unchecked += unchecked;
        }
        Results::Gap { certificate } => {
            let unchecked = verify_gap_certificate(certificate).map_err(bounds_err)?;
            summary.checked += 1;
            summary.unchecked += unchecked;
        }
        Results::Properties { report } => {
            if !report.passed() {
                return Err("property suite reported failures".into());
            }
            summary.checked += report.suites.len();
        }
    }
    Ok(summary)
}

fn clique_witness(certs: &[Certificate]) -> Result<&Vec<usize>, String> {
    certs
        .iter()
        .find_map(|c| match c {
            Certificate::Clique { power: 1, vertices } => Some(vertices),
            _ => None,
        })
        .ok_or_else(|| "missing clique certificate".to_string())
}
