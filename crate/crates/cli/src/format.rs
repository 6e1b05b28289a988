//! Fixed numeric formatting for reports.

/// Two decimals, used for scores, ranks and error reductions.
pub fn fixed2(x: f64) -> String {
    let s = format!("{x:.2}");
    if s == "-0.00" {
        "0.00".to_string()
    } else {
        s
    }
}

/// `x` rounded to two decimals, for JSON.
pub fn round2(x: f64) -> f64 {
    let r = (x * 100.0).round() / 100.0;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Probability in scientific notation with five significant digits.
pub fn sci5(p: f64) -> String {
    format!("{p:.4e}")
}

/// `p` rounded to five significant digits, for JSON.
pub fn sig5(p: f64) -> f64 {
    sci5(p).parse().expect("formatted float parses")
}
