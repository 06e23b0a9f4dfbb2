//! Result documents: JSON on standard output, CSV rows for trajectories.

use qsl_core::{
    Attainment, BoundsReport, Complex64, Method, PassageResult, RationalStructure, TimeBound,
};
use serde_json::{json, Value};
use std::f64::consts::PI;

/// Finite bounds print as numbers; an unreachable bound prints as the string
/// "inf" so consumers never mistake it for a time.
fn time_bound(b: TimeBound) -> Value {
    match b {
        TimeBound::Finite(v) => json!(v),
        TimeBound::Unbounded => json!("inf"),
    }
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::ExactTwoLevel => "exact_two_level",
        Method::ExactSymmetric => "exact_symmetric",
        Method::Numeric => "numeric",
    }
}

fn attainment_name(a: Attainment) -> &'static str {
    match a {
        Attainment::Attains => "attains",
        Attainment::Exceeds => "exceeds",
        Attainment::NoPassage => "no_passage",
    }
}

pub fn bounds_document(hbar: f64, report: &BoundsReport, in_pi: bool) -> Value {
    let mut doc = json!({
        "hbar": hbar,
        "delta_h": report.dispersion,
        "fleming": time_bound(report.fleming),
        "margolus_levitin": time_bound(report.margolus_levitin),
        "ml_never_sharper": report.ml_never_sharper,
    });
    if let Some(tau) = report.two_level_passage {
        doc["delta_e_passage"] = json!(tau);
    }
    if in_pi {
        if let TimeBound::Finite(v) = report.fleming {
            doc["fleming_in_pi"] = json!(v / PI);
        }
        if let TimeBound::Finite(v) = report.margolus_levitin {
            doc["margolus_levitin_in_pi"] = json!(v / PI);
        }
        if let Some(tau) = report.two_level_passage {
            doc["delta_e_passage_in_pi"] = json!(tau / PI);
        }
    }
    doc
}

pub fn passage_document(
    result: &PassageResult,
    attainment: Attainment,
    geodesic: Option<bool>,
    in_pi: bool,
) -> Value {
    let mut doc = json!({
        "found": result.found,
        "time": result.time,
        "residual": result.residual,
        "min_location": result.min_location,
        "window": result.window,
        "method": method_name(result.method),
        "fleming_ratio": result.fleming_ratio,
        "attainment": attainment_name(attainment),
        "geodesic": geodesic,
    });
    if in_pi {
        if let Some(t) = result.time {
            doc["time_in_pi"] = json!(t / PI);
        }
    }
    doc
}

/// Passage report for a state that never leaves its initial ray.
pub fn eigenstate_passage_document() -> Value {
    json!({
        "found": false,
        "time": null,
        "residual": 1.0,
        "method": null,
        "attainment": "no_passage",
        "reason": "eigenstate: the survival probability stays 1 at all times",
    })
}

pub fn spectrum_document(hbar: f64, s: &RationalStructure, in_pi: bool) -> Value {
    let ratios: Vec<Value> = s
        .ratios
        .iter()
        .map(|r| match r {
            Some((p, q)) => json!([p, q]),
            None => Value::Null,
        })
        .collect();
    let ratio_odd_odd: Vec<Value> = s
        .ratios
        .iter()
        .map(|r| match r {
            Some((p, q)) => json!(p % 2 == 1 && q % 2 == 1),
            None => Value::Null,
        })
        .collect();
    let mut doc = json!({
        "hbar": hbar,
        "frequencies": s.frequencies,
        "ratios": ratios,
        "ratio_odd_odd": ratio_odd_odd,
        "all_commensurate": s.all_commensurate,
        "odd_odd": s.odd_odd,
        "period": s.period,
    });
    if in_pi {
        if let Some(p) = s.period {
            doc["period_in_pi"] = json!(p / PI);
        }
    }
    doc
}

pub struct DiagonalCheck {
    pub probe_time: f64,
    pub max_diagonal_drift: f64,
    pub hermiticity_error: f64,
    pub trace_error: f64,
    pub positive_semidefinite: bool,
}

pub fn ensemble_document(
    time: Option<f64>,
    reason: Option<&str>,
    member_overlaps: Option<&[f64]>,
    diag: &DiagonalCheck,
    in_pi: bool,
) -> Value {
    let mut doc = json!({
        "found": time.is_some(),
        "time": time,
        "reason": reason,
        "member_overlaps": member_overlaps,
        "diagonal_invariance": {
            "probe_time": diag.probe_time,
            "max_diagonal_drift": diag.max_diagonal_drift,
            "hermiticity_error": diag.hermiticity_error,
            "trace_error": diag.trace_error,
            "positive_semidefinite": diag.positive_semidefinite,
        },
    });
    if in_pi {
        if let Some(t) = time {
            doc["time_in_pi"] = json!(t / PI);
        }
    }
    doc
}

/// One CSV trajectory row with 17 significant digits per field.
pub fn csv_row(t: f64, amplitude: Complex64, probability: f64, distance: f64) -> String {
    format!(
        "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
        t, amplitude.re, amplitude.im, probability, distance
    )
}

pub const CSV_HEADER: &str = "t,re_a,im_a,survival_prob,fs_distance";
