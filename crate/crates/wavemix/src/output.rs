//! Deterministic text emission for JSON and CSV artifacts.
//!
//! Every float is printed with 17 significant digits so that emitted values
//! round-trip exactly to the `f64` they came from, and repeated runs on the
//! same inputs produce byte-identical output.

use num_complex::Complex64 as C64;

/// Format a float with 17 significant digits (scientific notation).
///
/// 17 digits are always sufficient for exact `f64` round-tripping.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// A complex number as a two-element JSON array `[re, im]`.
pub fn json_complex(z: C64) -> String {
    format!("[{},{}]", fmt_f64(z.re), fmt_f64(z.im))
}

/// A real slice as a JSON array.
pub fn json_f64_array(xs: &[f64]) -> String {
    let items = xs.iter().map(|x| fmt_f64(*x)).collect::<Vec<_>>();
    format!("[{}]", items.join(","))
}

/// A JSON string literal with the mandatory escapes applied.
pub fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// A JSON array of usize indices.
pub fn json_usize_array(xs: &[usize]) -> String {
    let items = xs.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    format!("[{}]", items.join(","))
}
