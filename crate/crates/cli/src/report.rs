//! Structured run reports. Each command produces exactly one [`Report`];
//! the JSON document is its serde serialization, and the human-readable
//! text is rendered from the same struct, never computed separately.
//! Rationals cross this boundary as exact `p/q` strings.

use quadchi::acceptance::CriterionOutcome;
use quadchi::gw::GWClass;
use quadchi::k0var::TraceLine;
use quadchi::pairing::GradedGram;
use quadchi::RatMatrix;
use serde::Serialize;

#[derive(Serialize)]
pub struct Report {
    pub tool: ToolInfo,
    pub command: String,
    pub input: InputEcho,
    pub result: CmdResult,
    pub timings: Timings,
}

#[derive(Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

impl Default for ToolInfo {
    fn default() -> Self {
        ToolInfo {
            name: "quadchi",
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

#[derive(Serialize, Default)]
pub struct InputEcho {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variety: Option<String>,
    /// Normalized fan in the text format.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fan: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expression: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blowup: Option<BittnerInput>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub box_radius: Option<i64>,
    pub threads: usize,
}

#[derive(Serialize)]
pub struct BittnerInput {
    pub base: String,
    pub center: String,
    pub codim: u32,
}

#[derive(Serialize)]
pub struct Timings {
    pub total_ms: u128,
}

#[derive(Serialize)]
pub struct ClassRecord {
    pub canonical: String,
    pub rank: i64,
    pub signature: i64,
    pub disc: String,
    pub hasse: Vec<HasseEntry>,
}

#[derive(Serialize)]
pub struct HasseEntry {
    pub prime: String,
    pub value: i8,
}

impl ClassRecord {
    pub fn of(class: &GWClass) -> ClassRecord {
        ClassRecord {
            canonical: class.to_canonical_string(),
            rank: class.rank(),
            signature: class.signature(),
            disc: class.disc().to_string(),
            hasse: class
                .hasse()
                .iter()
                .map(|(p, v)| HasseEntry {
                    prime: p.to_string(),
                    value: *v,
                })
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct GramRecord {
    pub degree: i64,
    /// Row summands as (i, j, index) into the Hodge table bases.
    pub rows: Vec<(usize, usize, usize)>,
    pub cols: Vec<(usize, usize, usize)>,
    /// Exact rational entries as strings.
    pub matrix: Vec<Vec<String>>,
}

fn matrix_strings(m: &RatMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m[(i, j)].to_string()).collect())
        .collect()
}

pub fn gram_records(g: &GradedGram, only_degree: Option<i64>) -> Vec<GramRecord> {
    g.blocks
        .iter()
        .filter(|b| only_degree.is_none_or(|t| b.degree == t))
        .map(|b| GramRecord {
            degree: b.degree,
            rows: b.rows.clone(),
            cols: b.cols.clone(),
            matrix: matrix_strings(&b.matrix),
        })
        .collect()
}

#[derive(Serialize)]
pub struct HhRecord {
    pub t: i64,
    pub dim: usize,
}

/// Per-sheaf cohomology evidence: dimensions, the character box used, and
/// the basis cocycles as chart-tuple → Laurent term lists.
#[derive(Serialize)]
pub struct CohRecord {
    /// Form degree j of the sheaf Ω^j.
    pub j: usize,
    pub dims: Vec<usize>,
    pub box_radius: i64,
    pub stable: bool,
    pub classes: Vec<ClassBasisRecord>,
}

#[derive(Serialize)]
pub struct ClassBasisRecord {
    /// Cohomological degree i of the class.
    pub i: usize,
    pub character: Vec<i64>,
    pub cocycle: Vec<CochainValueRecord>,
}

#[derive(Serialize)]
pub struct CochainValueRecord {
    pub tuple: Vec<usize>,
    /// One Laurent polynomial per frame element of the tuple's first chart.
    pub values: Vec<String>,
}

pub fn coh_records(ctx: &quadchi::pairing::HodgeCtx) -> Vec<CohRecord> {
    ctx.coh
        .iter()
        .enumerate()
        .map(|(j, coh)| CohRecord {
            j,
            dims: coh.dims.clone(),
            box_radius: coh.box_radius,
            stable: coh.stable,
            classes: coh
                .classes
                .iter()
                .enumerate()
                .flat_map(|(i, classes)| {
                    classes.iter().map(move |h| ClassBasisRecord {
                        i,
                        character: h.character.clone(),
                        cocycle: h
                            .cochain
                            .tuples()
                            .map(|(tuple, values)| CochainValueRecord {
                                tuple: tuple.clone(),
                                values: values.iter().map(|p| p.to_string()).collect(),
                            })
                            .collect(),
                    })
                })
                .collect(),
        })
        .collect()
}

#[derive(Serialize)]
pub struct TraceRecord {
    pub node: String,
    pub rule: String,
    pub value: String,
}

impl TraceRecord {
    pub fn of(t: &TraceLine) -> TraceRecord {
        TraceRecord {
            node: t.node.clone(),
            rule: t.rule.clone(),
            value: t.value.clone(),
        }
    }
}

#[derive(Serialize)]
pub struct CriterionRecord {
    pub id: String,
    pub title: String,
    pub passed: bool,
    pub detail: String,
}

impl CriterionRecord {
    pub fn of(o: &CriterionOutcome) -> CriterionRecord {
        CriterionRecord {
            id: o.id.to_string(),
            title: o.title.to_string(),
            passed: o.passed,
            detail: o.detail.clone(),
        }
    }
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CmdResult {
    Chi {
        class: ClassRecord,
        hodge_table: Vec<Vec<usize>>,
        gram: Vec<GramRecord>,
    },
    Hodge {
        table: Vec<Vec<usize>>,
        diagonal: Vec<usize>,
        cohomology: Vec<CohRecord>,
    },
    Gram {
        blocks: Vec<GramRecord>,
    },
    Hh {
        dims: Vec<HhRecord>,
    },
    K0 {
        class: ClassRecord,
        euler_rank: i64,
        derivation: Vec<TraceRecord>,
    },
    Bittner {
        residual: ClassRecord,
        is_zero: bool,
    },
    Verify {
        criteria: Vec<CriterionRecord>,
        all_passed: bool,
    },
}

/// The human rendering, derived from the report struct alone.
pub fn render_human(report: &Report) -> String {
    let mut out = String::new();
    match &report.result {
        CmdResult::Chi { class, .. } => {
            out.push_str(&class.canonical);
            out.push('\n');
        }
        CmdResult::Hodge {
            table, diagonal, ..
        } => {
            out.push_str("h^{i,j} (rows i, cols j):\n");
            for row in table {
                let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
                out.push_str(&format!("  {}\n", cells.join(" ")));
            }
            let d: Vec<String> = diagonal.iter().map(|x| x.to_string()).collect();
            out.push_str(&format!("diagonal: {}\n", d.join(",")));
        }
        CmdResult::Gram { blocks } => {
            for b in blocks {
                out.push_str(&format!("block t={}:\n", b.degree));
                for row in &b.matrix {
                    out.push_str(&format!("  [{}]\n", row.join(", ")));
                }
            }
        }
        CmdResult::Hh { dims } => {
            for r in dims {
                if r.dim != 0 {
                    out.push_str(&format!("HH_{} = {}\n", r.t, r.dim));
                }
            }
            if dims.iter().all(|r| r.dim == 0) {
                out.push_str("all Hochschild dimensions are zero\n");
            }
        }
        CmdResult::K0 {
            class,
            euler_rank,
            derivation,
        } => {
            out.push_str(&format!("{}\n", class.canonical));
            out.push_str(&format!("euler rank: {euler_rank}\n"));
            for t in derivation {
                out.push_str(&format!("  {} | {} => {}\n", t.node, t.rule, t.value));
            }
        }
        CmdResult::Bittner { residual, is_zero } => {
            out.push_str(&format!("residual: {}\n", residual.canonical));
            out.push_str(if *is_zero {
                "relation holds\n"
            } else {
                "relation FAILS\n"
            });
        }
        CmdResult::Verify {
            criteria,
            all_passed,
        } => {
            for c in criteria {
                let status = if c.passed { "PASS" } else { "FAIL" };
                out.push_str(&format!("{status} {}: {} — {}\n", c.id, c.title, c.detail));
            }
            out.push_str(if *all_passed {
                "all criteria passed\n"
            } else {
                "some criteria FAILED\n"
            });
        }
    }
    out
}
