//! Distribution syntax on the command line:
//! `uniform01`, `exp:RATE`, `erlang:RATE:STAGES`, `det:VALUE`,
//! `mixerlang:w1:r1:k1:w2:r2:k2[...]`, `empirical:PATH` (one decimal
//! per line).

use carousel_core::queue::{DistributionSpec, ErlangBranch};

use crate::AppError;

pub fn parse_distribution(spec: &str) -> Result<DistributionSpec, AppError> {
    let mut parts = spec.split(':');
    let family = parts.next().unwrap_or_default();
    let rest: Vec<&str> = parts.collect();
    let bad = |msg: String| AppError::usage(format!("distribution `{spec}`: {msg}"));

    let parse_f64 = |s: &str| -> Result<f64, AppError> {
        s.parse::<f64>().map_err(|e| bad(format!("bad number `{s}`: {e}")))
    };
    let parse_usize = |s: &str| -> Result<usize, AppError> {
        s.parse::<usize>().map_err(|e| bad(format!("bad integer `{s}`: {e}")))
    };

    let dist = match family {
        "uniform01" => {
            if !rest.is_empty() {
                return Err(bad("uniform01 takes no parameters".into()));
            }
            Ok(DistributionSpec::Uniform01)
        }
        "exp" => {
            if rest.len() != 1 {
                return Err(bad("expected exp:RATE".into()));
            }
            DistributionSpec::exponential(parse_f64(rest[0])?).map_err(AppError::from)
        }
        "erlang" => {
            if rest.len() != 2 {
                return Err(bad("expected erlang:RATE:STAGES".into()));
            }
            DistributionSpec::erlang(parse_f64(rest[0])?, parse_usize(rest[1])?)
                .map_err(AppError::from)
        }
        "det" => {
            if rest.len() != 1 {
                return Err(bad("expected det:VALUE".into()));
            }
            DistributionSpec::deterministic(parse_f64(rest[0])?).map_err(AppError::from)
        }
        "mixerlang" => {
            if rest.is_empty() || rest.len() % 3 != 0 {
                return Err(bad("expected mixerlang:w1:r1:k1[:w2:r2:k2...]".into()));
            }
            let mut branches = Vec::new();
            for chunk in rest.chunks(3) {
                branches.push(ErlangBranch {
                    weight: parse_f64(chunk[0])?,
                    rate: parse_f64(chunk[1])?,
                    stages: parse_usize(chunk[2])?,
                });
            }
            DistributionSpec::mixed_erlang(branches).map_err(AppError::from)
        }
        "empirical" => {
            if rest.is_empty() {
                return Err(bad("expected empirical:PATH".into()));
            }
            // paths may contain ':' on exotic setups; rejoin
            let path = rest.join(":");
            let samples = load_samples(&path)?;
            DistributionSpec::empirical(samples).map_err(AppError::from)
        }
        other => Err(bad(format!(
            "unknown family `{other}` (uniform01 | exp | erlang | det | mixerlang | empirical)"
        ))),
    }?;
    Ok(dist)
}

/// One decimal per line; blank lines and `#` comments skipped.
pub fn load_samples(path: &str) -> Result<Vec<f64>, AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::usage(format!("cannot read samples {path}: {e}")))?;
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(line.parse::<f64>().map_err(|e| {
            AppError::usage(format!("{path}:{}: bad sample `{line}`: {e}", lineno + 1))
        })?);
    }
    if out.is_empty() {
        return Err(AppError::usage(format!("{path}: no samples")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families_parse() {
        assert!(matches!(
            parse_distribution("uniform01").unwrap(),
            DistributionSpec::Uniform01
        ));
        assert!(matches!(
            parse_distribution("exp:2.5").unwrap(),
            DistributionSpec::Exponential { .. }
        ));
        assert!(matches!(
            parse_distribution("erlang:2:3").unwrap(),
            DistributionSpec::Erlang { stages: 3, .. }
        ));
        assert!(matches!(
            parse_distribution("det:0.4").unwrap(),
            DistributionSpec::Deterministic { .. }
        ));
        assert!(matches!(
            parse_distribution("mixerlang:0.3:1:1:0.7:2:2").unwrap(),
            DistributionSpec::MixedErlang { .. }
        ));
    }

    #[test]
    fn malformed_specs_are_usage_errors() {
        for bad in ["exp", "exp:x", "erlang:1", "wat:1", "mixerlang:0.5:1", "uniform01:3"] {
            assert!(parse_distribution(bad).is_err(), "{bad}");
        }
    }
}
