use std::io::Write;

use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use super::{decimal, BoundReport, CrossRow, ScanSummary, DECIMAL_DIGITS};
use crate::{Int, Rational};

pub const CSV_HEADER: [&str; 14] = [
    "n",
    "m",
    "route",
    "mu",
    "tau_min",
    "q",
    "tau_minus",
    "sigma",
    "kappa",
    "ratio_num",
    "ratio_den",
    "ratio_decimal",
    "verdict",
    "trace_digest",
];

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

fn csv_record(row: &BoundReport) -> [String; 14] {
    [
        row.n.to_string(),
        row.m.to_string(),
        row.route.to_string(),
        row.mu.to_string(),
        opt(&row.tau_min),
        opt(&row.q),
        opt(&row.tau_minus),
        opt(&row.sigma),
        opt(&row.kappa),
        opt(&row.ratio.as_ref().map(|r| r.numer().clone())),
        opt(&row.ratio.as_ref().map(|r| r.denom().clone())),
        opt(&row.ratio_decimal()),
        row.verdict.to_string(),
        row.trace_digest.clone(),
    ]
}

pub fn write_csv(rows: &[BoundReport], w: impl Write) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CSV_HEADER)?;
    for row in rows {
        out.write_record(csv_record(row))?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_crosscheck_csv(rows: &[CrossRow], w: impl Write) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["n", "m", "check", "left", "right", "status", "note"])?;
    for row in rows {
        out.write_record([
            row.n.to_string(),
            row.m.to_string(),
            row.check.to_string(),
            opt(&row.left),
            opt(&row.right),
            format!("{:?}", row.status),
            row.note.clone(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

fn int(v: &Int) -> Value {
    match v.to_i64() {
        Some(x) => Value::from(x),
        None => Value::from(v.to_string()),
    }
}

fn opt_int(v: &Option<Int>) -> Value {
    v.as_ref().map(int).unwrap_or(Value::Null)
}

fn rational(v: &Option<Rational>) -> Value {
    v.as_ref().map(|r| Value::from(r.to_string())).unwrap_or(Value::Null)
}

fn json_row(row: &BoundReport) -> Value {
    let mut obj = Map::new();
    obj.insert("n".into(), int(&row.n));
    obj.insert("m".into(), int(&row.m));
    obj.insert("route".into(), Value::from(row.route.to_string()));
    obj.insert("mu".into(), int(&row.mu));
    obj.insert("tau_min".into(), opt_int(&row.tau_min));
    obj.insert("q".into(), opt_int(&row.q));
    obj.insert("tau_minus".into(), opt_int(&row.tau_minus));
    obj.insert("sigma".into(), opt_int(&row.sigma));
    obj.insert("kappa".into(), rational(&row.kappa));
    obj.insert("ratio_num".into(), opt_int(&row.ratio.as_ref().map(|r| r.numer().clone())));
    obj.insert("ratio_den".into(), opt_int(&row.ratio.as_ref().map(|r| r.denom().clone())));
    obj.insert(
        "ratio_decimal".into(),
        row.ratio_decimal().map(Value::from).unwrap_or(Value::Null),
    );
    obj.insert("verdict".into(), Value::from(row.verdict.to_string()));
    obj.insert("trace_digest".into(), Value::from(row.trace_digest.clone()));
    obj.insert("tau_source".into(), serde_json::to_value(row.tau_source).expect("plain enum"));
    if row.lower_bound.is_some() {
        obj.insert("lower_bound".into(), rational(&row.lower_bound));
    }
    if let Some(c) = row.conditions {
        obj.insert(
            "conditions".into(),
            json!({ "stated": c.stated, "derived": c.derived }),
        );
    }
    if let Some(reason) = &row.reason {
        obj.insert("reason".into(), Value::from(reason.clone()));
    }
    if let Some((p, q, d)) = &row.family {
        obj.insert("family".into(), json!({ "p": int(p), "q": int(q), "d": int(d) }));
    }
    Value::Object(obj)
}

fn json_summary(s: &ScanSummary) -> Value {
    let pair = |(n, m): &(Int, Int)| json!([int(n), int(m)]);
    json!({
        "range": s.range,
        "count": s.count,
        "max_ratio": s.max_ratio.as_ref().map(|(r, _)| r.to_string()),
        "max_ratio_decimal": s.max_ratio.as_ref().map(|(r, _)| decimal(r, DECIMAL_DIGITS)),
        "max_ratio_pair": s.max_ratio.as_ref().map(|(_, p)| pair(p)),
        "bound_only": s.bound_only,
        "violations": s.violations.iter().map(pair).collect::<Vec<_>>(),
        "unavailable": s
            .unavailable
            .iter()
            .map(|(p, why)| json!({ "pair": pair(p), "reason": why }))
            .collect::<Vec<_>>(),
    })
}

/// `{"summary": ..., "rows": [...]}`, pretty-printed with a trailing newline.
pub fn write_json(rows: &[BoundReport], summary: &ScanSummary, mut w: impl Write) -> std::io::Result<()> {
    let doc = json!({
        "summary": json_summary(summary),
        "rows": rows.iter().map(json_row).collect::<Vec<_>>(),
    });
    serde_json::to_writer_pretty(&mut w, &doc)?;
    writeln!(w)
}
