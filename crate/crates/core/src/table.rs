//! Plain CSV emission shared by the grid and scan writers.

use std::io::{self, Write};

/// Formats `value` in scientific notation with `digits` significant digits.
/// Negative zero is printed as zero so equal tables compare byte-for-byte.
pub fn fmt_sig(value: f64, digits: usize) -> String {
    let v = if value == 0.0 { 0.0 } else { value };
    format!("{:.*e}", digits.saturating_sub(1), v)
}

pub(crate) fn write_rows<W, R>(mut out: W, header: &str, rows: R, digits: usize) -> io::Result<()>
where
    W: Write,
    R: IntoIterator,
    R::Item: AsRef<[f64]>,
{
    writeln!(out, "{header}")?;
    for row in rows {
        let line: Vec<String> = row.as_ref().iter().map(|v| fmt_sig(*v, digits)).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(1.0, 9), "1.00000000e0");
        assert_eq!(fmt_sig(-0.0, 3), "0.00e0");
        assert_eq!(fmt_sig(std::f64::consts::PI, 12), "3.14159265359e0");
    }
}
