//! Matrix file I/O in the library's JSON schema:
//! `{ "dim": n, "entries": [[[re, im], ...], ...] }`, row-major, complex
//! scalars as `[re, im]`. Round-trips are bit-exact for finite doubles.

use std::path::Path;

use anyhow::{bail, Context, Result};
use impq_core::{ComplexMatrix, Projector};

pub fn load_matrix(path: &Path) -> Result<ComplexMatrix> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading matrix file {}", path.display()))?;
    let matrix: ComplexMatrix = serde_json::from_str(&text)
        .with_context(|| format!("{}: schema violation", path.display()))?;
    if matrix.dim() == 0 {
        bail!("{}: dim must be a positive integer", path.display());
    }
    Ok(matrix)
}

pub fn save_matrix(path: &Path, matrix: &ComplexMatrix) -> Result<()> {
    let text = serde_json::to_string_pretty(matrix).context("serializing matrix")?;
    std::fs::write(path, text.as_bytes())
        .with_context(|| format!("writing matrix file {}", path.display()))?;
    Ok(())
}

pub fn load_projector(path: &Path) -> Result<Projector> {
    let matrix = load_matrix(path)?;
    Projector::new(matrix)
        .with_context(|| format!("{}: not a certified projector", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use impq_core::random::{haar_random_projector, Seed};

    #[test]
    fn round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        let p = haar_random_projector(8, 3, Seed(7)).unwrap();
        save_matrix(&path, p.matrix()).unwrap();
        let back = load_matrix(&path).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(
                    p.matrix().get(i, j).re.to_bits(),
                    back.get(i, j).re.to_bits()
                );
                assert_eq!(
                    p.matrix().get(i, j).im.to_bits(),
                    back.get(i, j).im.to_bits()
                );
            }
        }
    }

    #[test]
    fn rejects_ragged_entries() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        std::fs::write(
            &path,
            r#"{"dim":2,"entries":[[[1.0,0.0],[0.0,0.0]],[[0.0,0.0]]]}"#,
        )
        .unwrap();
        let err = load_matrix(&path).unwrap_err();
        assert!(format!("{err:#}").contains("schema violation"));
    }

    #[test]
    fn rejects_nan() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nan.json");
        std::fs::write(
            &path,
            r#"{"dim":1,"entries":[[[NaN,0.0]]]}"#,
        )
        .unwrap();
        assert!(load_matrix(&path).is_err());
    }
}
