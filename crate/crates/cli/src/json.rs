//! Machine-readable output: stable key order, big integers and rationals
//! as decimal strings (never floats), optional fields omitted when absent.

use serde::Serialize;
use ultgeo::{Classification, PrimeCertificate, PrimeReport, SeqSpec};

/// Coefficient arrays in ascending order, `"p/q"` or `"n"` per entry.
#[derive(Clone, Debug, Serialize)]
pub struct SpecJson {
    pub f: Vec<String>,
    pub g: Vec<String>,
    pub h: Vec<String>,
}

impl SpecJson {
    pub fn from_spec(spec: &SeqSpec) -> Self {
        let strings = |p: &ultgeo::Poly| p.coeffs().iter().map(|c| c.to_string()).collect();
        SpecJson {
            f: strings(spec.f()),
            g: strings(spec.g()),
            h: strings(spec.h()),
        }
    }
}

/// Payload of `eval` (and `example --action eval`).
#[derive(Serialize)]
pub struct EvalJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyJson>,
    pub spec: SpecJson,
    pub terms: Vec<String>,
}

/// Payload of `classify` (and `example --action classify`).
#[derive(Serialize)]
pub struct ClassifyJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyJson>,
    pub spec: SpecJson,
    pub classification: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n0: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub primes: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub caveat_zero_term: Option<bool>,
}

impl ClassifyJson {
    pub fn new(
        spec: &SeqSpec,
        verdict: &Classification,
        certificate: Option<&PrimeCertificate>,
    ) -> Self {
        let mut json = ClassifyJson {
            family: None,
            spec: SpecJson::from_spec(spec),
            classification: classification_tag(verdict),
            b: None,
            c: None,
            n0: None,
            reason: None,
            primes: None,
            caveat_zero_term: None,
        };
        match verdict {
            Classification::ZeroSequence => {}
            Classification::Geometric { b, c } => {
                json.b = Some(b.to_string());
                json.c = Some(c.to_string());
            }
            Classification::UltimatelyGeometric { b, c, n0 } => {
                json.b = Some(b.to_string());
                json.c = Some(c.to_string());
                json.n0 = Some(*n0);
            }
            Classification::NotUltimatelyGeometric { reason } => {
                json.reason = Some(reason.tag());
            }
        }
        if let Some(cert) = certificate {
            json.primes = Some(cert.primes.iter().map(|p| p.to_string()).collect());
            json.caveat_zero_term = Some(cert.caveat_zero_term);
        }
        json
    }
}

pub fn classification_tag(verdict: &Classification) -> &'static str {
    match verdict {
        Classification::ZeroSequence => "zero_sequence",
        Classification::Geometric { .. } => "geometric",
        Classification::UltimatelyGeometric { .. } => "ultimately_geometric",
        Classification::NotUltimatelyGeometric { .. } => "not_ultimately_geometric",
    }
}

/// Payload of `primes` (and `example --action primes`).
#[derive(Serialize)]
pub struct PrimesJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyJson>,
    pub spec: SpecJson,
    pub terms_scanned: usize,
    pub primes: Vec<String>,
    pub first_occurrence: Vec<FirstOccurrenceJson>,
    pub zero_terms: Vec<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub unfactored: Vec<UnfactoredJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub growth: Option<Vec<GrowthPointJson>>,
}

#[derive(Serialize)]
pub struct FirstOccurrenceJson {
    pub prime: String,
    pub n: usize,
}

#[derive(Serialize)]
pub struct UnfactoredJson {
    pub n: usize,
    pub cofactor: String,
}

#[derive(Serialize)]
pub struct GrowthPointJson {
    pub n: usize,
    pub primes: usize,
}

impl PrimesJson {
    pub fn new(spec: &SeqSpec, report: &PrimeReport, growth: Option<Vec<(usize, usize)>>) -> Self {
        PrimesJson {
            family: None,
            spec: SpecJson::from_spec(spec),
            terms_scanned: report.terms_scanned,
            primes: report.primes().map(|p| p.to_string()).collect(),
            first_occurrence: report
                .first_occurrence
                .iter()
                .map(|(p, n)| FirstOccurrenceJson { prime: p.to_string(), n: *n })
                .collect(),
            zero_terms: report.zero_terms.clone(),
            unfactored: report
                .unfactored
                .iter()
                .map(|(n, cof)| UnfactoredJson { n: *n, cofactor: cof.to_string() })
                .collect(),
            growth: growth.map(|points| {
                points
                    .into_iter()
                    .map(|(n, primes)| GrowthPointJson { n, primes })
                    .collect()
            }),
        }
    }
}

/// Family identification echoed in `example` output.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyJson {
    pub name: &'static str,
    pub params: ParamsJson,
    pub claimed: &'static str,
}

/// Only the parameters the family actually consumes are echoed.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ParamsJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n0: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<u32>,
}

pub fn to_line(value: &impl Serialize) -> String {
    serde_json::to_string(value).expect("output structs serialize infallibly")
}
