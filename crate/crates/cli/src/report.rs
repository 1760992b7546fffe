//! Versioned report documents and their JSON schema.

use rotalg_core::circle_sets::CircleSet;
use rotalg_core::diophantine::AngleDescriptor;
use rotalg_core::ideal_calculus::{
    Certificate, Classification, ClosedReport, Decomposition, SimplicityVerdict, SupportReport, Triviality, Valued,
};
use rotalg_sandbox::finite_group_sandbox::{ActionDoc, IntermediateAlgebraReport, MatrixModelReport};
use rotalg_sandbox::rotation_sandbox::Mode;
use rotalg_sandbox::suites::{AveragingReport, CenterSuiteReport, DerivativeSuiteReport, FejerReport, GroupSuiteReport, RingLawReport};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub const SCHEMA_NAME: &str = "rotalg-report";
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    CheckFailed,
    NotExact,
}

/// Options as they were in effect for the run.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ReportOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(default)]
    pub require_exact: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub version: u32,
    pub tool_version: String,
    pub verb: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<AngleDescriptor>,
    pub options: ReportOptions,
    pub status: Status,
    pub body: Body,
}

impl Report {
    pub fn new(verb: &str, angle: Option<AngleDescriptor>, options: ReportOptions, body: Body) -> Self {
        let status = if options.require_exact && !body.exact() {
            Status::NotExact
        } else if body.passed() {
            Status::Ok
        } else {
            Status::CheckFailed
        };
        Report {
            schema: SCHEMA_NAME.into(),
            version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").into(),
            verb: verb.into(),
            angle,
            options,
            status,
            body,
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("reports serialize");
        text.push('\n');
        text
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValuesSummary {
    /// Empty at every index of the window.
    AllEmpty,
    /// Full at every nonzero index of the window.
    Trivial,
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueRow {
    pub n: i64,
    pub set: CircleSet,
    pub certificate: Certificate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValuesBody {
    pub result: ValuesSummary,
    pub certificate: Certificate,
    pub window: i64,
    pub values: Vec<ValueRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationBody {
    pub classification: Classification,
    pub support: SupportReport,
    pub q_intersection: Valued,
    pub omega: CircleSet,
    pub omega_truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessBody {
    pub zero_value: CircleSet,
    pub triviality: Triviality,
    pub closed: ClosedReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicityBody {
    pub verdict: SimplicityVerdict,
    pub intersection: Valued,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessBody>,
    pub notes: Vec<String>,
}

/// One numeric claim with the bound it is held to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub comparison: Comparison,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Comparison {
    #[serde(rename = "<")]
    Below,
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
    #[serde(rename = "==")]
    Equal,
}

impl Check {
    pub fn new(name: impl Into<String>, value: f64, comparison: Comparison, bound: f64) -> Self {
        let pass = match comparison {
            Comparison::Below => value < bound,
            Comparison::AtMost => value <= bound,
            Comparison::AtLeast => value >= bound,
            Comparison::Equal => value == bound,
        };
        Check { name: name.into(), value, comparison, bound, pass }
    }

    pub fn flag(name: impl Into<String>, holds: bool) -> Self {
        Check::new(name, if holds { 1.0 } else { 0.0 }, Comparison::Equal, 1.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionBody {
    pub action: ActionDoc,
    pub intermediate: IntermediateAlgebraReport,
    pub matrix_model: MatrixModelReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "suite", rename_all = "kebab-case")]
pub enum SuiteData {
    Fejer(FejerReport),
    RingLaws(RingLawReport),
    Averaging(AveragingReport),
    Derivative(DerivativeSuiteReport),
    Center(CenterSuiteReport),
    Group(GroupSuiteReport),
    Action(ActionBody),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteBody {
    pub mode: Mode,
    pub seed: Option<u64>,
    pub checks: Vec<Check>,
    pub data: SuiteData,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Body {
    Values(ValuesBody),
    Closed(ClosedReport),
    Decomposition(Decomposition),
    Classification(ClassificationBody),
    Simplicity(SimplicityBody),
    Suite(SuiteBody),
}

impl Body {
    pub fn passed(&self) -> bool {
        match self {
            Body::Values(_) | Body::Classification(_) | Body::Simplicity(_) => true,
            Body::Closed(r) => r.holds,
            Body::Decomposition(d) => d.reproduces,
            Body::Suite(s) => s.checks.iter().all(|c| c.pass),
        }
    }

    /// Whether every certificate in the body is exact; float suites never are.
    pub fn exact(&self) -> bool {
        match self {
            Body::Values(v) => v.certificate.is_exact(),
            Body::Closed(r) => r.certificate.is_exact(),
            Body::Decomposition(d) => d.certificate.is_exact(),
            Body::Classification(c) => {
                c.classification.certificate.is_exact() && c.support.certificate.is_exact() && c.q_intersection.certificate.is_exact()
            }
            Body::Simplicity(s) => s.intersection.certificate.is_exact(),
            Body::Suite(s) => s.mode == Mode::Exact,
        }
    }
}

/// JSON Schema (draft 2020-12) for every report document.
pub fn report_schema() -> Value {
    let certificate = json!({
        "type": "object",
        "required": ["status"],
        "properties": {
            "status": {"enum": ["exact", "upper-bound"]},
            "depth_used": {"type": "integer", "minimum": 0},
            "window": {"type": "integer"},
            "notes": {"type": "array", "items": {"type": "string"}}
        },
        "additionalProperties": false
    });
    let point = json!({
        "type": "object",
        "required": ["q", "n"],
        "properties": {"q": {"type": "string"}, "n": {"type": "integer"}},
        "additionalProperties": false
    });
    let circle_set = json!({
        "oneOf": [
            {"type": "object", "required": ["full"], "properties": {"full": {"type": "boolean"}}, "additionalProperties": false},
            {
                "type": "object",
                "required": ["components"],
                "properties": {"components": {"type": "array", "items": {"oneOf": [
                    {"type": "object", "required": ["pt"], "properties": {"pt": {"$ref": "#/$defs/point"}}, "additionalProperties": false},
                    {"type": "object", "required": ["arc"], "properties": {"arc": {
                        "type": "object",
                        "required": ["start", "end"],
                        "properties": {"start": {"$ref": "#/$defs/point"}, "end": {"$ref": "#/$defs/point"}},
                        "additionalProperties": false
                    }}, "additionalProperties": false}
                ]}}},
                "additionalProperties": false
            }
        ]
    });
    let valued = json!({
        "type": "object",
        "required": ["set", "certificate"],
        "properties": {"set": {"$ref": "#/$defs/circle_set"}, "certificate": {"$ref": "#/$defs/certificate"}}
    });
    let closed = json!({
        "type": "object",
        "required": ["kind", "holds", "window", "violations", "certificate"],
        "properties": {
            "kind": {"const": "closed"},
            "holds": {"type": "boolean"},
            "window": {"type": "integer"},
            "violations": {"type": "array", "items": {
                "type": "object",
                "required": ["law"],
                "properties": {"law": {"enum": ["non-empty-at-zero", "symmetry", "product", "domination"]}}
            }},
            "certificate": {"$ref": "#/$defs/certificate"}
        }
    });
    let values = json!({
        "type": "object",
        "required": ["kind", "result", "certificate", "window", "values"],
        "properties": {
            "kind": {"const": "values"},
            "result": {"enum": ["all-empty", "trivial", "mixed"]},
            "certificate": {"$ref": "#/$defs/certificate"},
            "window": {"type": "integer", "minimum": 0},
            "values": {"type": "array", "items": {
                "type": "object",
                "required": ["n", "set", "certificate"],
                "properties": {
                    "n": {"type": "integer"},
                    "set": {"$ref": "#/$defs/circle_set"},
                    "certificate": {"$ref": "#/$defs/certificate"}
                },
                "additionalProperties": false
            }}
        }
    });
    let decomposition = json!({
        "type": "object",
        "required": ["kind", "critical", "basics", "reproduces", "mismatches", "window", "certificate"],
        "properties": {
            "kind": {"const": "decomposition"},
            "critical": {"type": "array", "items": {"type": "integer"}},
            "basics": {"type": "array", "items": {
                "type": "array",
                "prefixItems": [{"type": "integer"}, {"$ref": "#/$defs/circle_set"}],
                "minItems": 2,
                "maxItems": 2
            }},
            "reproduces": {"type": "boolean"},
            "mismatches": {"type": "array", "items": {"type": "integer"}},
            "window": {"type": "integer"},
            "certificate": {"$ref": "#/$defs/certificate"}
        }
    });
    let classification = json!({
        "type": "object",
        "required": ["kind", "classification", "support", "q_intersection", "omega", "omega_truncated"],
        "properties": {
            "kind": {"const": "classification"},
            "classification": {
                "type": "object",
                "required": ["class", "residual", "small", "certificate"],
                "properties": {
                    "class": {"enum": ["residual", "small", "neither"]},
                    "residual": {"type": "boolean"},
                    "small": {"type": "boolean"},
                    "certificate": {"$ref": "#/$defs/certificate"}
                }
            },
            "support": {
                "type": "object",
                "required": ["support", "certificate"],
                "properties": {
                    "support": {"type": "object", "required": ["kind"], "properties": {"kind": {"enum": ["subgroup", "finite", "window"]}}},
                    "certificate": {"$ref": "#/$defs/certificate"}
                }
            },
            "q_intersection": {"$ref": "#/$defs/valued"},
            "omega": {"$ref": "#/$defs/circle_set"},
            "omega_truncated": {"type": "boolean"}
        }
    });
    let simplicity = json!({
        "type": "object",
        "required": ["kind", "verdict", "intersection", "notes"],
        "properties": {
            "kind": {"const": "simplicity"},
            "verdict": {"enum": ["simple", "not-simple", "inconclusive"]},
            "intersection": {"$ref": "#/$defs/valued"},
            "witness": {
                "type": "object",
                "required": ["zero_value", "triviality", "closed"],
                "properties": {
                    "zero_value": {"$ref": "#/$defs/circle_set"},
                    "triviality": {"enum": ["zero", "whole", "proper"]},
                    "closed": {"type": "object", "required": ["holds", "window", "violations", "certificate"]}
                }
            },
            "notes": {"type": "array", "items": {"type": "string"}}
        }
    });
    let check = json!({
        "type": "object",
        "required": ["name", "value", "comparison", "bound", "pass"],
        "properties": {
            "name": {"type": "string"},
            "value": {"type": "number"},
            "comparison": {"enum": ["<", "<=", ">=", "=="]},
            "bound": {"type": "number"},
            "pass": {"type": "boolean"}
        },
        "additionalProperties": false
    });
    let suite = json!({
        "type": "object",
        "required": ["kind", "mode", "seed", "checks", "data"],
        "properties": {
            "kind": {"const": "suite"},
            "mode": {"enum": ["exact", "float"]},
            "seed": {"type": ["integer", "null"], "minimum": 0},
            "checks": {"type": "array", "items": {"$ref": "#/$defs/check"}},
            "data": {
                "type": "object",
                "required": ["suite"],
                "properties": {"suite": {"enum": ["fejer", "ring-laws", "averaging", "derivative", "center", "group", "action"]}}
            }
        }
    });
    json!({
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "$id": format!("{SCHEMA_NAME}/{SCHEMA_VERSION}"),
        "title": "rotalg report",
        "type": "object",
        "required": ["schema", "version", "tool_version", "verb", "options", "status", "body"],
        "properties": {
            "schema": {"const": SCHEMA_NAME},
            "version": {"const": SCHEMA_VERSION},
            "tool_version": {"type": "string"},
            "verb": {"enum": [
                "eval", "check-closed", "meet", "join", "close", "decompose", "classify", "simplicity",
                "sandbox-verify", "group-verify"
            ]},
            "angle": {"type": "object", "required": ["kind"], "properties": {"kind": {"enum": ["surd", "cf"]}}},
            "options": {
                "type": "object",
                "properties": {
                    "window": {"type": "integer", "minimum": 0},
                    "depth": {"type": "integer", "minimum": 0},
                    "tolerance": {"type": "number", "exclusiveMinimum": 0},
                    "mode": {"enum": ["exact", "float"]},
                    "require_exact": {"type": "boolean"}
                },
                "additionalProperties": false
            },
            "status": {"enum": ["ok", "check-failed", "not-exact"]},
            "body": {"oneOf": [
                {"$ref": "#/$defs/values"},
                {"$ref": "#/$defs/closed"},
                {"$ref": "#/$defs/decomposition"},
                {"$ref": "#/$defs/classification"},
                {"$ref": "#/$defs/simplicity"},
                {"$ref": "#/$defs/suite"}
            ]}
        },
        "additionalProperties": false,
        "$defs": {
            "certificate": certificate,
            "point": point,
            "circle_set": circle_set,
            "valued": valued,
            "check": check,
            "values": values,
            "closed": closed,
            "decomposition": decomposition,
            "classification": classification,
            "simplicity": simplicity,
            "suite": suite
        }
    })
}
