//! JSON and CSV renderings of convergence reports. Numbers carry every
//! digit of the context precision.

use rug::{Complex, Float};
use serde_json::{json, Map, Number, Value};

use super::outer::{ConvergenceReport, Record};
use super::regularize::RegularizationReport;

/// Decimal text for `x` with enough digits to round-trip its precision.
pub fn float_text(x: &Float) -> String {
    if x.is_zero() {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "NaN".into() } else if x.is_sign_negative() { "-inf".into() } else { "inf".into() };
    }
    let digits = (f64::from(x.prec()) * std::f64::consts::LOG10_2).ceil() as usize + 1;
    x.to_string_radix(10, Some(digits))
}

fn number(x: &Float) -> Value {
    match float_text(x).parse::<Number>() {
        Ok(n) => Value::Number(n),
        Err(_) => Value::Null,
    }
}

pub fn complex_json(z: &Complex) -> Value {
    json!({ "re": number(z.real()), "im": number(z.imag()) })
}

fn record_json(r: &Record) -> Value {
    json!({
        "n": r.n,
        "re": number(r.value.real()),
        "im": number(r.value.imag()),
        "err_est": number(&r.err_est),
        "elapsed_ms": r.elapsed.as_millis() as u64,
    })
}

/// One streamed table row as a JSON object.
pub fn record_line(r: &Record) -> String {
    record_json(r).to_string()
}

pub const CSV_HEADER: &str = "n,re,im,err_est,elapsed_ms";

pub fn record_csv(r: &Record) -> String {
    format!(
        "{},{},{},{},{}",
        r.n,
        float_text(r.value.real()),
        float_text(r.value.imag()),
        float_text(&r.err_est),
        r.elapsed.as_millis()
    )
}

/// The closing extrapolation row of a CSV table (`n` reads `extrapolated`).
pub fn extrapolated_csv(rep: &ConvergenceReport) -> String {
    format!(
        "extrapolated,{},{},{},0",
        float_text(rep.extrapolated.real()),
        float_text(rep.extrapolated.imag()),
        float_text(&rep.err_est)
    )
}

pub fn extrapolated_line(rep: &ConvergenceReport) -> String {
    json!({
        "extrapolated": complex_json(&rep.extrapolated),
        "err_est": number(&rep.err_est),
        "method": rep.method.to_string(),
    })
    .to_string()
}

impl ConvergenceReport {
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("weight".into(), Value::String(self.weight.clone()));
        m.insert("s".into(), json!({ "re": self.s.re.to_string(), "im": self.s.im.to_string() }));
        m.insert("precision_bits".into(), json!(self.precision_bits));
        m.insert("method".into(), Value::String(self.method.to_string()));
        m.insert("records".into(), Value::Array(self.records.iter().map(record_json).collect()));
        m.insert("extrapolated".into(), complex_json(&self.extrapolated));
        m.insert("err_est".into(), number(&self.err_est));
        if let Some(t) = &self.target_hint {
            m.insert("target_hint".into(), complex_json(t));
        }
        Value::Object(m)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            out.push_str(&record_csv(r));
            out.push('\n');
        }
        out.push_str(&extrapolated_csv(self));
        out.push('\n');
        out
    }
}

impl RegularizationReport {
    pub fn to_json(&self) -> Value {
        json!({
            "delta_grid": self.delta_grid.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            "raw": self.raw.iter().map(complex_json).collect::<Vec<_>>(),
            "subtracted": self.subtracted.iter().map(complex_json).collect::<Vec<_>>(),
            "extrapolated_gamma_over_sqrt_pi": complex_json(&self.extrapolated_gamma_over_sqrt_pi),
            "err_est": number(&self.err_est),
            "method": format!("pole-subtracted, polynomial in delta:{}", self.delta_grid.len().saturating_sub(1)),
            "runs": self.runs.iter().map(ConvergenceReport::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("delta,raw_re,raw_im,subtracted_re,subtracted_im\n");
        for ((d, raw), sub) in self.delta_grid.iter().zip(&self.raw).zip(&self.subtracted) {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                d,
                float_text(raw.real()),
                float_text(raw.imag()),
                float_text(sub.real()),
                float_text(sub.imag())
            ));
        }
        out.push_str(&format!(
            "extrapolated,,,{},{}\n",
            float_text(self.extrapolated_gamma_over_sqrt_pi.real()),
            float_text(self.extrapolated_gamma_over_sqrt_pi.imag())
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::time::Duration;

    #[test]
    fn float_text_is_json_number() {
        for v in [0.928f64, -12345.5, 1e-30, 3.0] {
            let t = float_text(&Float::with_val(192, v));
            assert!(t.parse::<Number>().is_ok(), "{t}");
            let back = Float::with_val(192, Float::parse(&t).unwrap());
            assert_eq!(back, Float::with_val(192, v));
        }
        assert_eq!(float_text(&Float::new(64)), "0");
    }

    #[test]
    fn record_fields() {
        let r = Record {
            n: 64,
            value: Complex::with_val(128, (0.5, -0.25)),
            err_est: Float::with_val(128, 1e-3),
            elapsed: Duration::from_millis(7),
        };
        let v: Value = serde_json::from_str(&record_line(&r)).unwrap();
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["n", "re", "im", "err_est", "elapsed_ms"]);
        assert_eq!(record_csv(&r).split(',').count(), 5);
        assert!(record_csv(&r).ends_with(",7"));
    }
}
