//! Number formatting and small CSV helpers shared by reports and the CLI.

/// Formats `x` with 15 significant digits; scientific notation outside `[1e-5, 1e15)`.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let e = x.abs().log10().floor() as i32;
    if !(-5..15).contains(&e) {
        return format!("{x:.14e}");
    }
    let prec = (14 - e).max(0) as usize;
    let s = format!("{x:.prec$}");
    // log10 can land one decade low right below a power of ten; re-trim if the
    // rounded text grew a digit.
    let digits = s.chars().filter(|c| c.is_ascii_digit()).count();
    let leading_zeros = s
        .trim_start_matches('-')
        .chars()
        .take_while(|&c| c == '0' || c == '.')
        .filter(|&c| c == '0')
        .count();
    if digits - leading_zeros > 15 && prec > 0 {
        let p = prec - 1;
        return format!("{x:.p$}");
    }
    s
}

pub fn csv_row(fields: &[String]) -> String {
    let mut s = fields.join(",");
    s.push('\n');
    s
}
