use std::str::FromStr;

use anyhow::{bail, Context, Result};
use evoca_core::tasks::gen_unbiased;
use evoca_core::{Lattice, StreamKey};

/// Initial configuration given on the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum IcSpec {
    AllOn,
    AllOff,
    /// Literal cells, `0`/`1`, cell 0 first.
    Bits(String),
    /// Each cell ON with probability 1/2.
    Random,
    /// Exactly `round(d * n)` ON cells at random positions.
    Density(f64),
}

impl FromStr for IcSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all-on" => IcSpec::AllOn,
            "all-off" => IcSpec::AllOff,
            "random" => IcSpec::Random,
            _ => {
                if let Some(bits) = s.strip_prefix("bits:") {
                    IcSpec::Bits(bits.to_string())
                } else if let Some(d) = s.strip_prefix("density:") {
                    let d: f64 = d.parse().context("density must be a number")?;
                    if !(0.0..=1.0).contains(&d) {
                        bail!("density must be in [0, 1]");
                    }
                    IcSpec::Density(d)
                } else {
                    bail!("unknown IC {s:?}; use all-on, all-off, random, density:<d> or bits:<cells>")
                }
            }
        })
    }
}

impl std::fmt::Display for IcSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IcSpec::AllOn => f.write_str("all-on"),
            IcSpec::AllOff => f.write_str("all-off"),
            IcSpec::Bits(b) => write!(f, "bits:{b}"),
            IcSpec::Random => f.write_str("random"),
            IcSpec::Density(d) => write!(f, "density:{d}"),
        }
    }
}

impl IcSpec {
    pub fn build(&self, n_cells: usize, seed: Option<u64>) -> Result<Lattice> {
        if n_cells == 0 {
            bail!("--n-cells must be positive");
        }
        let rng = || -> Result<_> {
            let seed = seed.context("--seed is required for a random initial configuration")?;
            Ok(StreamKey::new(seed).rng(0))
        };
        Ok(match self {
            IcSpec::AllOn => Lattice::ones(n_cells),
            IcSpec::AllOff => Lattice::zeros(n_cells),
            IcSpec::Bits(bits) => {
                let l: Lattice = bits.parse()?;
                if l.len() != n_cells {
                    bail!("IC has {} cells but --n-cells is {n_cells}", l.len());
                }
                l
            }
            IcSpec::Random => gen_unbiased(n_cells, &mut rng()?),
            IcSpec::Density(d) => {
                let k = (d * n_cells as f64).round() as usize;
                Lattice::random_with_count(n_cells, k, &mut rng()?)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_forms() {
        assert_eq!("all-on".parse::<IcSpec>().unwrap(), IcSpec::AllOn);
        assert_eq!("bits:101".parse::<IcSpec>().unwrap(), IcSpec::Bits("101".into()));
        assert_eq!("density:0.48".parse::<IcSpec>().unwrap(), IcSpec::Density(0.48));
        assert!("density:1.5".parse::<IcSpec>().is_err());
        assert!("nope".parse::<IcSpec>().is_err());
    }

    #[test]
    fn density_ic_has_rounded_count() {
        let l = IcSpec::Density(0.48).build(149, Some(3)).unwrap();
        assert_eq!(l.count_ones(), 72);
        assert!(IcSpec::Random.build(149, None).is_err());
        assert!(IcSpec::Bits("101".into()).build(4, None).is_err());
    }
}
