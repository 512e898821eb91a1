//! Parsers for the code, Eb/N0 and variant-list arguments.

use anyhow::{anyhow, bail, Context, Result};
use stepgrand::codes::{build_bch, load_alist, load_dense, nr_ca_polar_128};
use stepgrand::{LinearCode, Variant};

/// `bch127`, `capolar128`, `alist:<path>` or `dense:<path>`.
pub fn code(spec: &str) -> Result<LinearCode> {
    let code = match spec.split_once(':') {
        None if spec == "bch127" => build_bch(7, 3)?,
        None if spec == "capolar128" => nr_ca_polar_128()?,
        Some(("alist", path)) => load_alist(path).with_context(|| format!("reading {path}"))?,
        Some(("dense", path)) => load_dense(path).with_context(|| format!("reading {path}"))?,
        _ => bail!(
            "unknown code '{spec}' (expected bch127, capolar128, alist:<path> or dense:<path>)"
        ),
    };
    Ok(code)
}

fn number(s: &str) -> Result<f64> {
    let x: f64 = s
        .trim()
        .parse()
        .map_err(|_| anyhow!("'{s}' is not a number"))?;
    if !x.is_finite() {
        bail!("'{s}' is not finite");
    }
    Ok(x)
}

/// `start:step:stop` (inclusive) or a comma-separated list.
pub fn ebn0_list(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let list = match parts.as_slice() {
        [one] => one.split(',').map(number).collect::<Result<Vec<_>>>()?,
        [start, step, stop] => {
            let (start, step, stop) = (number(start)?, number(step)?, number(stop)?);
            if step <= 0.0 {
                bail!("Eb/N0 step must be positive");
            }
            if stop < start {
                bail!("Eb/N0 range {start}:{step}:{stop} is empty");
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            // round away accumulated binary fractions so CSV values stay short
            (0..count)
                .map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9)
                .collect()
        }
        _ => bail!("Eb/N0 '{s}' must be start:step:stop or a comma-separated list"),
    };
    if list.is_empty() {
        bail!("empty Eb/N0 list");
    }
    Ok(list)
}

/// Keyword parameters of one variant.
#[derive(Clone, Copy, Debug, Default)]
pub struct Params {
    pub alpha: Option<usize>,
    pub beta: Option<usize>,
    pub pmax: Option<usize>,
    pub ab: Option<usize>,
    pub lwmax: Option<usize>,
}

impl Params {
    fn merged(self, defaults: Params) -> Params {
        Params {
            alpha: self.alpha.or(defaults.alpha),
            beta: self.beta.or(defaults.beta),
            pmax: self.pmax.or(defaults.pmax),
            ab: self.ab.or(defaults.ab),
            lwmax: self.lwmax.or(defaults.lwmax),
        }
    }
}

fn need(v: Option<usize>, name: &str, decoder: &str) -> Result<usize> {
    v.ok_or_else(|| anyhow!("{decoder} needs {name}"))
}

pub fn variant(name: &str, p: Params) -> Result<Variant> {
    Ok(match name {
        "grandab" => Variant::GrandAb {
            ab: need(p.ab, "ab", name)?,
        },
        "orbgrand" => Variant::OrbGrand {
            lw_max: need(p.lwmax, "lwmax", name)?,
            p_max: need(p.pmax, "pmax", name)?,
        },
        "stepgrand" => Variant::step(
            need(p.alpha, "alpha", name)?,
            need(p.beta, "beta", name)?,
            need(p.pmax, "pmax", name)?,
        )?,
        _ => bail!("unknown decoder '{name}' (expected grandab, orbgrand or stepgrand)"),
    })
}

/// `name[:key=value]*` items separated by commas; missing keys fall back to
/// `defaults`.
pub fn variant_list(s: &str, defaults: Params) -> Result<Vec<Variant>> {
    s.split(',')
        .map(|item| {
            let mut fields = item.trim().split(':');
            let name = fields.next().unwrap_or_default();
            let mut p = Params::default();
            for kv in fields {
                let (k, v) = kv
                    .split_once('=')
                    .ok_or_else(|| anyhow!("'{kv}' in '{item}' is not key=value"))?;
                let v: usize = v.parse().map_err(|_| anyhow!("'{v}' is not a count"))?;
                let slot = match k {
                    "alpha" => &mut p.alpha,
                    "beta" => &mut p.beta,
                    "pmax" => &mut p.pmax,
                    "ab" => &mut p.ab,
                    "lwmax" => &mut p.lwmax,
                    _ => bail!("unknown parameter '{k}' in '{item}'"),
                };
                *slot = Some(v);
            }
            variant(name, p.merged(defaults))
        })
        .collect()
}
