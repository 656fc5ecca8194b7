use std::io::{Read, Write};

use num_complex::Complex64;

use super::{Method, Spectrum};
use crate::error::{Error, Result};
use crate::io::fmt_float;

/// Spectrum as CSV with columns `index,re,im`. Moduli-only spectra write the
/// modulus in `re` and `NaN` in `im`.
pub fn write_spectrum_csv<W: Write + ?Sized>(out: &mut W, spectrum: &Spectrum, preamble: Option<&str>) -> Result<()> {
    if let Some(p) = preamble {
        writeln!(out, "# {p}")?;
    }
    writeln!(out, "index,re,im")?;
    for (i, z) in spectrum.points.iter().enumerate() {
        let im = if spectrum.has_angles { fmt_float(z.im) } else { "NaN".to_string() };
        writeln!(out, "{i},{},{im}", fmt_float(z.re))?;
    }
    Ok(())
}

/// Contents of a binary batch file.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumBatch {
    pub n: usize,
    pub seed: u64,
    pub method: Method,
    pub spectra: Vec<Vec<Complex64>>,
}

/// Binary batch: header of four little-endian `u64` (`n`, `count`, `seed`,
/// method tag) followed by `count·n` points as little-endian `f64` pairs
/// `re, im`. All spectra must share `n`, `seed` and `method`.
pub fn write_batch<W: Write + ?Sized>(out: &mut W, batch: &[Spectrum]) -> Result<()> {
    let first = batch.first().ok_or_else(|| Error::Domain("empty batch".into()))?;
    if batch.iter().any(|s| s.n != first.n || s.seed != first.seed || s.method != first.method) {
        return Err(Error::Domain("batch spectra must share n, seed and method".into()));
    }
    for v in [first.n as u64, batch.len() as u64, first.seed, first.method.tag()] {
        out.write_all(&v.to_le_bytes())?;
    }
    for s in batch {
        for z in &s.points {
            let im = if s.has_angles { z.im } else { f64::NAN };
            out.write_all(&z.re.to_le_bytes())?;
            out.write_all(&im.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn read_batch<R: Read>(input: &mut R) -> Result<SpectrumBatch> {
    let mut word = [0u8; 8];
    let mut header = [0u64; 4];
    for h in &mut header {
        input.read_exact(&mut word)?;
        *h = u64::from_le_bytes(word);
    }
    let [n, count, seed, tag] = header;
    let method = Method::from_tag(tag).ok_or_else(|| Error::Domain(format!("unknown method tag {tag}")))?;
    let mut spectra = Vec::with_capacity(count as usize);
    for _ in 0..count {
        let mut pts = Vec::with_capacity(n as usize);
        for _ in 0..n {
            input.read_exact(&mut word)?;
            let re = f64::from_le_bytes(word);
            input.read_exact(&mut word)?;
            let im = f64::from_le_bytes(word);
            pts.push(Complex64::new(re, im));
        }
        spectra.push(pts);
    }
    Ok(SpectrumBatch { n: n as usize, seed, method, spectra })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::ginibre_batch;

    #[test]
    fn binary_round_trip_is_exact() {
        let batch = ginibre_batch(5, 3, 8).unwrap();
        let mut buf = Vec::new();
        write_batch(&mut buf, &batch).unwrap();
        assert_eq!(buf.len(), 32 + 3 * 5 * 16);
        let back = read_batch(&mut buf.as_slice()).unwrap();
        assert_eq!(back.n, 5);
        assert_eq!(back.seed, 8);
        assert_eq!(back.method, Method::GinibreDense);
        for (a, b) in back.spectra.iter().zip(&batch) {
            assert_eq!(a, &b.points);
        }
        assert!(read_batch(&mut &buf[..40]).is_err());
    }

    #[test]
    fn csv_layout() {
        let s = &ginibre_batch(2, 1, 1).unwrap()[0];
        let mut buf = Vec::new();
        write_spectrum_csv(&mut buf, s, Some("test")).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# test");
        assert_eq!(lines[1], "index,re,im");
        let cols: Vec<&str> = lines[2].split(',').collect();
        assert_eq!(cols[1].parse::<f64>().unwrap(), s.points[0].re);
    }
}
