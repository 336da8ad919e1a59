//! Plain-text rendering. Everything here is ASCII, deterministic, and
//! free of wall-clock or environment dependence.

use std::io::{self, Write};

use ultgeo::{
    BigInt, Classification, FamilyInstance, NonGeometricReason, PrimeCertificate, PrimeReport,
    SeqSpec,
};

use crate::json::ParamsJson;
use crate::search::{spec_at, SearchConfig, SearchReportJson};

// ---- Shared fragments ----

pub fn reason_sentence(reason: &NonGeometricReason) -> &'static str {
    match reason {
        NonGeometricReason::HNotConstant => {
            "h is not constant, so the power term has no single base"
        }
        NonGeometricReason::RatioIdentityFails => {
            "no integer constants b, c satisfy b*g = c*(b - f)"
        }
        NonGeometricReason::NoResetZeroOfF => {
            "f has no nonnegative integer zero, so the initial deviation never dies out"
        }
        NonGeometricReason::FNonConstantProductForm => {
            "g*h is identically zero and f is not constant, so consecutive ratios keep changing"
        }
    }
}

pub fn verdict_sentence(verdict: &Classification) -> String {
    match verdict {
        Classification::ZeroSequence => "zero sequence: every term is 0".into(),
        Classification::Geometric { b, c } => {
            format!("geometric: a(n) = {c} * {b}^n for all n >= 0")
        }
        Classification::UltimatelyGeometric { b, c, n0 } => {
            format!("ultimately geometric: a(n) = {c} * {b}^n for n >= {n0}")
        }
        Classification::NotUltimatelyGeometric { reason } => {
            format!(
                "not ultimately geometric ({}): {}",
                reason.tag(),
                reason_sentence(reason)
            )
        }
    }
}

pub fn write_spec_lines<W: Write>(out: &mut W, spec: &SeqSpec) -> io::Result<()> {
    writeln!(out, "f = {}", spec.f())?;
    writeln!(out, "g = {}", spec.g())?;
    writeln!(out, "h = {}", spec.h())
}

pub fn write_terms_line<W: Write>(out: &mut W, terms: &[BigInt]) -> io::Result<()> {
    let rendered: Vec<String> = terms.iter().map(BigInt::to_string).collect();
    writeln!(out, "{}", rendered.join(" "))
}

// ---- Subcommand bodies ----

pub fn write_classification<W: Write>(
    out: &mut W,
    verdict: &Classification,
    certificate: Option<&PrimeCertificate>,
) -> io::Result<()> {
    writeln!(out, "classification: {}", verdict_sentence(verdict))?;
    if let Some(cert) = certificate {
        let primes: Vec<String> = cert.primes.iter().map(|p| p.to_string()).collect();
        writeln!(
            out,
            "primes dividing some nonzero term: {{{}}} and nothing else",
            primes.join(", ")
        )?;
        if cert.caveat_zero_term {
            writeln!(
                out,
                "note: some term is 0, which every prime divides; the set above covers \
                 the nonzero terms"
            )?;
        }
    }
    Ok(())
}

pub fn write_prime_report<W: Write>(
    out: &mut W,
    report: &PrimeReport,
    growth: Option<&[(usize, usize)]>,
) -> io::Result<()> {
    writeln!(
        out,
        "scanned a(0)..a({}): {} distinct primes",
        report.terms_scanned.saturating_sub(1),
        report.prime_count()
    )?;
    for (p, n) in &report.first_occurrence {
        writeln!(out, "  {p} first divides a({n})")?;
    }
    if report.zero_terms.is_empty() {
        writeln!(out, "zero terms: none")?;
    } else {
        let indices: Vec<String> = report.zero_terms.iter().map(usize::to_string).collect();
        writeln!(out, "zero terms at n = {}", indices.join(", "))?;
    }
    for (n, cofactor) in &report.unfactored {
        writeln!(
            out,
            "unfactored cofactor of a({n}): {cofactor} (its primes are not counted)"
        )?;
    }
    if let Some(points) = growth {
        writeln!(out, "growth curve:")?;
        for (n, count) in points {
            writeln!(out, "  a(0)..a({n}): {count} primes")?;
        }
    }
    Ok(())
}

pub fn write_family_header<W: Write>(
    out: &mut W,
    instance: &FamilyInstance,
    params: &ParamsJson,
) -> io::Result<()> {
    let mut rendered = Vec::new();
    if let Some(b) = params.b {
        rendered.push(format!("b = {b}"));
    }
    if let Some(c) = params.c {
        rendered.push(format!("c = {c}"));
    }
    if let Some(d) = params.d {
        rendered.push(format!("d = {d}"));
    }
    if let Some(q) = params.q {
        rendered.push(format!("q = {q}"));
    }
    if let Some(n0) = params.n0 {
        rendered.push(format!("n0 = {n0}"));
    }
    if let Some(l) = params.l {
        rendered.push(format!("l = {l}"));
    }
    if rendered.is_empty() {
        writeln!(out, "family {}", instance.name)?;
    } else {
        writeln!(out, "family {} ({})", instance.name, rendered.join(", "))?;
    }
    writeln!(out, "claimed: {}", verdict_sentence(&instance.claimed))?;
    write_spec_lines(out, &instance.spec)
}

pub fn write_search_report<W: Write>(out: &mut W, report: &SearchReportJson) -> io::Result<()> {
    let SearchConfig {
        deg_max,
        coeff_max,
        term_count,
        prime_checkpoint,
        prime_threshold,
    } = &report.config;
    writeln!(
        out,
        "box: degree <= {deg_max}, coefficients in [-{coeff_max}, {coeff_max}]: {} specs",
        report.summary.total
    )?;
    writeln!(
        out,
        "verdicts checked on a(0)..a({term_count}); primes counted through a({prime_checkpoint})"
    )?;
    writeln!(out, "verdict counts:")?;
    writeln!(out, "  zero sequence            {}", report.summary.zero_sequence)?;
    writeln!(out, "  geometric                {}", report.summary.geometric)?;
    writeln!(
        out,
        "  ultimately geometric     {}",
        report.summary.ultimately_geometric
    )?;
    writeln!(
        out,
        "  not ultimately geometric {}",
        report.summary.not_ultimately_geometric
    )?;
    writeln!(
        out,
        "candidates (not ultimately geometric, at most {prime_threshold} primes): {}",
        report.candidates.len()
    )?;
    for cand in &report.candidates {
        let spec = spec_at(&report.config, cand.index);
        writeln!(
            out,
            "  [{}] f = {}, g = {}, h = {}  ({} primes)",
            cand.index,
            spec.f(),
            spec.g(),
            spec.h(),
            cand.prime_count
        )?;
    }
    Ok(())
}
