use std::path::Path;

use triwork::{
    dm_from_pure, ghz_state, product_state, singlet_state, w_state, DensityMatrix, Direction,
};

use crate::error::{CliError, CliResult};

/// Resolves a state name or JSON state file and checks its qubit count.
pub fn load_state(name: &str, n_qubits: usize) -> CliResult<DensityMatrix> {
    let rho = match name.to_ascii_lowercase().as_str() {
        "ghz" => dm_from_pure(&ghz_state()),
        "w" => dm_from_pure(&w_state()),
        "singlet" => dm_from_pure(&singlet_state()),
        "product" => dm_from_pure(&product_state(&vec![Direction::z_axis(); n_qubits])?),
        "mixed" => DensityMatrix::maximally_mixed(n_qubits)?,
        _ => {
            let path = Path::new(name);
            if !path.is_file() {
                return Err(CliError::Input(format!(
                    "'{name}' is neither a known state (ghz, w, singlet, product, mixed) nor a file"
                )));
            }
            let text = std::fs::read_to_string(path)?;
            DensityMatrix::from_json(&text).map_err(|e| CliError::Input(format!("{name}: {e}")))?
        }
    };
    if rho.n_qubits() != n_qubits {
        return Err(CliError::Input(format!(
            "state '{name}' has {} qubits, this command needs {n_qubits}",
            rho.n_qubits()
        )));
    }
    Ok(rho)
}

/// Parses "THETA,PHI" into a direction.
pub fn parse_direction(text: &str, degrees: bool) -> CliResult<Direction> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [t, p] = parts.as_slice() else {
        return Err(CliError::Input(format!("expected THETA,PHI, got '{text}'")));
    };
    let num = |s: &str| {
        s.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| CliError::Input(format!("'{s}' is not a finite angle")))
    };
    let (mut theta, mut phi) = (num(t)?, num(p)?);
    if degrees {
        theta = theta.to_radians();
        phi = phi.to_radians();
    }
    Ok(Direction::new(theta, phi))
}

/// Parses "TxP" into grid dimensions.
pub fn parse_grid(text: &str) -> CliResult<(usize, usize)> {
    let bad = || CliError::Input(format!("expected a grid like 32x64, got '{text}'"));
    let (t, p) = text.split_once(['x', 'X']).ok_or_else(bad)?;
    let t = t.trim().parse().map_err(|_| bad())?;
    let p = p.trim().parse().map_err(|_| bad())?;
    Ok((t, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directions_parse() {
        let d = parse_direction("1.5707963267948966, 0", false).unwrap();
        assert!((d.vector()[0] - 1.0).abs() < 1e-12);
        let d = parse_direction("90,90", true).unwrap();
        assert!((d.vector()[1] - 1.0).abs() < 1e-12);
        assert!(parse_direction("1", false).is_err());
        assert!(parse_direction("a,b", false).is_err());
        assert!(parse_direction("nan,0", false).is_err());
    }

    #[test]
    fn grids_parse() {
        assert_eq!(parse_grid("16x32").unwrap(), (16, 32));
        assert!(parse_grid("16").is_err());
        assert!(parse_grid("x32").is_err());
    }

    #[test]
    fn named_states_have_expected_sizes() {
        assert_eq!(load_state("GHZ", 3).unwrap().n_qubits(), 3);
        assert_eq!(load_state("product", 2).unwrap().n_qubits(), 2);
        assert!(matches!(load_state("singlet", 3), Err(CliError::Input(_))));
        assert!(matches!(load_state("/no/such/file.json", 3), Err(CliError::Input(_))));
    }
}
