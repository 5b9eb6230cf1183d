use serde_json::Value;
use solomon_core::report::{MergeSummary, VerificationReport};

fn short(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Object(m) if m.contains_key("digits") => {
            format!("{} (N={})", m["digits"].as_str().unwrap_or("?"), m.get("precision").unwrap_or(&Value::Null))
        }
        other => {
            let s = other.to_string();
            if s.len() > 60 {
                format!("{}...", &s[..57])
            } else {
                s
            }
        }
    }
}

fn sol_block(r: &VerificationReport, out: &mut String) {
    let reps: Vec<String> = r.quantities.get("galois_representatives")
        .and_then(Value::as_array)
        .map(|a| a.iter().map(|v| v.to_string()).collect())
        .unwrap_or_default();
    let col = |key: &str| -> Vec<String> {
        r.quantities.get(key).and_then(Value::as_array)
            .map(|a| a.iter().map(|v| v.as_str().unwrap_or("").to_string()).collect())
            .unwrap_or_default()
    };
    let (sol, sol2) = (col("sol"), col("sol2"));
    out.push_str(&format!("field {}  p = {}\n", r.field, r.p));
    if let Some(e) = r.quantities.get("embedding") {
        out.push_str(&format!("embedding: {}\n", short(e)));
    }
    if let Some(g) = r.quantities.get("sol2_generator") {
        out.push_str(&format!("sol2 generator: {}\n", short(g)));
    }
    let w = sol.iter().chain(&sol2).map(String::len).max().unwrap_or(0).max(6);
    out.push_str(&format!("{:>6}  {:>w$}  {:>w$}\n", "g", "sol", "sol2"));
    for (i, g) in reps.iter().enumerate() {
        let a = sol.get(i).map(String::as_str).unwrap_or("");
        let b = sol2.get(i).map(String::as_str).unwrap_or("");
        out.push_str(&format!("{g:>6}  {a:>w$}  {b:>w$}\n"));
    }
}

pub fn table(rows: &[VerificationReport]) -> String {
    let mut out = String::new();
    for r in rows {
        if r.check == "sol" {
            sol_block(r, &mut out);
            continue;
        }
        out.push_str(&format!("{:<13} {:<28} p={:<4} {:?}\n", r.check, r.field, r.p, r.verdict));
        for (k, v) in &r.quantities {
            if k == "items" {
                continue;
            }
            out.push_str(&format!("    {k:<24} {}\n", short(v)));
        }
        if let Some(res) = &r.limiting_resource {
            out.push_str(&format!("    limiting resource        {res}\n"));
        }
    }
    out
}

pub fn summary(s: &MergeSummary) -> String {
    let mut out = format!("reports: {}\nduplicates: {}\n", s.total, s.duplicates);
    for (v, n) in &s.counts {
        out.push_str(&format!("{v:?}: {n}\n"));
    }
    for c in &s.conflicts {
        out.push_str(&format!("conflict: {c}\n"));
    }
    out
}
