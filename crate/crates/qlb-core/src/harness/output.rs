//! File emission helpers: atomic writes and the gnuplot script generator.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// Writes through a temporary file in the same directory, then renames.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let file_name = path
        .file_name()
        .ok_or_else(|| Error::Config(format!("not a file path: {}", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp", file_name.to_string_lossy()));
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Writes a self-contained gnuplot script rendering one figure per CSV.
/// Regeneration from identical CSVs is byte-identical; a missing CSV fails
/// with its name.
pub fn emit_plot_script(output_dir: &Path, csvs: &[PathBuf]) -> Result<PathBuf> {
    let mut script = String::new();
    script.push_str("# gnuplot script generated by qlb; run from this directory:\n");
    script.push_str("#   gnuplot plots.gp\n");
    script.push_str("set datafile separator \",\"\n");
    script.push_str("set terminal pngcairo size 900,600\n");
    script.push_str("set key outside\n");

    for csv in csvs {
        if !csv.exists() {
            return Err(Error::Config(format!(
                "cannot emit plot script: missing CSV {}",
                csv.display()
            )));
        }
        let name = csv
            .file_name()
            .ok_or_else(|| Error::Config(format!("not a file path: {}", csv.display())))?
            .to_string_lossy()
            .into_owned();
        let stem = csv
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| name.clone());

        script.push('\n');
        script.push_str(&format!("set output \"{stem}.png\"\n"));
        if stem.starts_with("case1") && !stem.contains("trace") {
            script.push_str("set title \"1D discontinuity after streaming\"\n");
            script.push_str("set xlabel \"x\"\nset ylabel \"p* and scaled u\"\n");
            script.push_str("unset logscale\n");
            script.push_str(&format!(
                "plot \"{name}\" using 1:2 skip 1 with lines title \"p* simulated\", \\\n     \"{name}\" using 1:4 skip 1 with lines title \"p* exact\", \\\n     \"{name}\" using 1:3 skip 1 with lines title \"u simulated\", \\\n     \"{name}\" using 1:5 skip 1 with lines title \"u exact\"\n"
            ));
        } else if stem.starts_with("case2_rmse") {
            script.push_str("set title \"Mean RMSE vs viscosity\"\n");
            script.push_str("set xlabel \"viscosity\"\nset ylabel \"mean RMSE\"\n");
            script.push_str("set logscale xy\n");
            script.push_str(&format!(
                "plot \"{name}\" using 1:2 skip 1 with linespoints title \"mean RMSE\"\n"
            ));
        } else if stem.starts_with("resources") {
            script.push_str("set title \"Qubit and CNOT scaling\"\n");
            script.push_str("set xlabel \"grid points\"\nset ylabel \"qubits / log10 CNOTs\"\n");
            script.push_str("set logscale x\nunset logscale y\n");
            script.push_str(&format!(
                "plot \"{name}\" using 1:3 skip 1 with lines title \"qubits present\", \\\n     \"{name}\" using 1:5 skip 1 with lines title \"qubits CL2\", \\\n     \"{name}\" using 1:6 skip 1 with lines title \"qubits CL3\", \\\n     \"{name}\" using 1:7 skip 1 with lines title \"log10 CNOT present\", \\\n     \"{name}\" using 1:8 skip 1 with lines title \"log10 CNOT CL2\"\n"
            ));
        } else {
            // Generic fallback: second column against the first.
            script.push_str(&format!("set title \"{stem}\"\n"));
            script.push_str("unset logscale\n");
            script.push_str(&format!(
                "plot \"{name}\" using 1:2 skip 1 with lines title \"{stem}\"\n"
            ));
        }
    }

    std::fs::create_dir_all(output_dir)?;
    let path = output_dir.join("plots.gp");
    atomic_write(&path, script.as_bytes())?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_replaces_content() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("data.csv");
        atomic_write(&path, b"a\n").unwrap();
        atomic_write(&path, b"b\n").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"b\n");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn plot_script_is_deterministic_and_complete() {
        let dir = tempfile::tempdir().unwrap();
        let case1 = dir.path().join("case1.csv");
        let rmse = dir.path().join("case2_rmse.csv");
        std::fs::write(&case1, "x,p\n0,1\n").unwrap();
        std::fs::write(&rmse, "nu,mean\n0.1,1e-9\n").unwrap();

        let csvs = vec![case1, rmse];
        let a = emit_plot_script(dir.path(), &csvs).unwrap();
        let first = std::fs::read(&a).unwrap();
        let b = emit_plot_script(dir.path(), &csvs).unwrap();
        assert_eq!(first, std::fs::read(&b).unwrap());

        let text = String::from_utf8(first).unwrap();
        assert_eq!(text.matches("set output").count(), 2, "one plot per CSV");
    }

    #[test]
    fn missing_csv_fails_by_name() {
        let dir = tempfile::tempdir().unwrap();
        let missing = dir.path().join("nope.csv");
        let err = emit_plot_script(dir.path(), &[missing]).unwrap_err();
        assert!(err.to_string().contains("nope.csv"));
    }
}
