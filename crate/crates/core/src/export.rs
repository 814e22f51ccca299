//! Shared CSV conventions: `\n` line endings and shortest round-trip float
//! text, switching to exponent form for very small or large magnitudes.

use std::io::Write;

pub fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

pub fn float(x: f64) -> String {
    format!("{x:?}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_text_round_trips() {
        assert_eq!(float(0.0), "0.0");
        assert_eq!(float(1e5), "100000.0");
        assert_eq!(float(5.785511350064492e-29), "5.785511350064492e-29");
        for x in [0.16153835928900764, -3.0552815796972475, 1e-300, 7.0] {
            assert_eq!(float(x).parse::<f64>().unwrap(), x);
        }
    }
}
