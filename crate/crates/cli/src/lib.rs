//! Library side of the `gpauli` command-line tool.

pub mod args;
pub mod corpus;
pub mod repro;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use gpauli::analysis::{
    decoherence_rates, in_dephasing_set, invertibility, is_semigroup, pdivisibility_rate_check,
    permanently_negative_count, semigroup_from_rates,
};
use gpauli::catalog::{oscillating_qubit, qutrit_weyl_pair};
use gpauli::channels::{choi_cp_oracle, dephasing_channel, fa_cp_check};
use gpauli::io::{load_channel, save_channel, ChannelSpec, SCHEMA_VERSION};
use gpauli::mub::mub_family;
use gpauli::{parse_expr, Channel, Grid};

use args::{Builder, CheckKind, Cli, Command, Format, GlobalOpts};

/// Process exit status.
pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_ANCHOR_FAILED: i32 = 2;

pub fn grid_of(opts: &GlobalOpts) -> Result<Grid> {
    match opts.grid {
        Some(g) => Ok(Grid::new(g.t_max, g.points)?),
        None => Ok(Grid::default()),
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable output") + "\n"
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

pub fn run(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Build { builder } => build(builder, &cli.global).map(|_| EXIT_OK),
        Command::Spectrum { spec } => {
            let ch = load_channel(spec)?;
            let grid = grid_of(&cli.global)?;
            emit(
                cli.global.out.as_deref(),
                &spectrum_table(&ch, &grid, cli.global.format)?,
            )?;
            Ok(EXIT_OK)
        }
        Command::Check { which, spec } => {
            let ch = load_channel(spec)?;
            let grid = grid_of(&cli.global)?;
            emit(
                cli.global.out.as_deref(),
                &check(*which, &ch, &grid, cli.global.format)?,
            )?;
            Ok(EXIT_OK)
        }
        Command::Repro { name } => {
            let dir = cli
                .global
                .out
                .clone()
                .unwrap_or_else(|| PathBuf::from("repro"));
            let summary = repro::run(name, &cli.global, &dir)?;
            emit(None, &to_json(&summary))?;
            Ok(if summary.all_pass {
                EXIT_OK
            } else {
                EXIT_ANCHOR_FAILED
            })
        }
    }
}

fn build(builder: &Builder, opts: &GlobalOpts) -> Result<()> {
    let grid = grid_of(opts)?;
    let ch: Channel<f64> = match builder {
        Builder::Semigroup { d, c } => {
            let mubs = Arc::new(mub_family(*d)?);
            semigroup_from_rates(mubs, &c.0)?.into()
        }
        Builder::Dephasing { d, alpha, pi } => {
            let mubs = Arc::new(mub_family(*d)?);
            let pi = parse_expr(pi).with_context(|| format!("--pi {pi:?}"))?;
            dephasing_channel(mubs, *alpha, pi, &grid)?.into()
        }
        Builder::Eq13 => oscillating_qubit(Arc::new(mub_family(2)?)).into(),
        Builder::WeylExample1 => {
            let dir = opts.out.clone().unwrap_or_else(|| PathBuf::from("."));
            fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
            let (p, q, mix) = qutrit_weyl_pair();
            for (name, ch) in [
                ("example1_p.json", p),
                ("example1_q.json", q),
                ("example1_mix.json", mix),
            ] {
                save_channel(&dir.join(name), &Channel::Weyl(ch), "builtin")?;
            }
            return Ok(());
        }
    };
    emit(
        opts.out.as_deref(),
        &to_json(&ChannelSpec::from_channel(&ch, "builtin")),
    )
}

/// Column labels and values of the eigenvalue functions at `t`.
pub fn spectrum_columns(
    ch: &Channel<f64>,
) -> (Vec<String>, Vec<String>, Box<dyn Fn(f64) -> Vec<f64>>) {
    match ch {
        Channel::Gpc(g) => {
            let spec = g.spectrum();
            let labels = (1..=spec.lambdas.len())
                .map(|a| format!("lambda_{a}"))
                .collect();
            let exprs = spec.lambdas.iter().map(|e| e.to_string()).collect();
            (labels, exprs, Box::new(move |t| spec.at(t)))
        }
        Channel::Weyl(w) => {
            let spec = w.spectrum();
            let d = spec.d;
            let mut labels = Vec::new();
            let mut exprs = Vec::new();
            for idx in 0..d * d {
                let (k, l) = (idx / d, idx % d);
                labels.push(format!("re_{k}_{l}"));
                labels.push(format!("im_{k}_{l}"));
                exprs.push(spec.re[idx].to_string());
                exprs.push(spec.im[idx].to_string());
            }
            (
                labels,
                exprs,
                Box::new(move |t| spec.at(t).iter().flat_map(|z| [z.re, z.im]).collect()),
            )
        }
    }
}

fn csv_text(header: &[String], rows: impl Iterator<Item = Vec<f64>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|x| x.to_string()))?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn spectrum_table(ch: &Channel<f64>, grid: &Grid, format: Format) -> Result<String> {
    let (labels, exprs, at) = spectrum_columns(ch);
    let rows = grid.points().map(|t| {
        let mut r = vec![t];
        r.extend(at(t));
        r
    });
    match format {
        Format::Csv => {
            let mut header = vec!["t".to_string()];
            header.extend(labels);
            csv_text(&header, rows)
        }
        Format::Json => Ok(to_json(&json!({
            "schema_version": SCHEMA_VERSION,
            "kind": ch.kind(),
            "d": ch.dim(),
            "labels": labels,
            "expressions": exprs,
            "grid": {"t_max": grid.t_max(), "points": grid.len()},
            "rows": rows.collect::<Vec<_>>(),
        }))),
    }
}

fn gpc_only<'a>(ch: &'a Channel<f64>, which: &str) -> Result<&'a gpauli::GpcChannel> {
    match ch {
        Channel::Gpc(g) => Ok(g),
        Channel::Weyl(_) => bail!("check {which} applies to generalized Pauli channels only"),
    }
}

pub fn round9(x: f64) -> f64 {
    (x * 1e9).round() / 1e9
}

/// Verdict JSON (or CSV for `rates`) for one analysis.
pub fn check(which: CheckKind, ch: &Channel<f64>, grid: &Grid, format: Format) -> Result<String> {
    let mut v: Value = match which {
        CheckKind::Cp => {
            let choi = choi_cp_oracle(ch, grid);
            let fa = match ch {
                Channel::Gpc(g) => Some(fa_cp_check(&g.spectrum(), grid)),
                Channel::Weyl(_) => None,
            };
            json!({"cp": choi.is_cp(), "fujiwara_algoet": fa, "choi": choi})
        }
        CheckKind::Invertible => {
            let r = invertibility(ch, grid);
            json!({
                "invertible": r.invertible,
                "first_zero": r.first_zero.map(round9),
                "zero_label": r.zero_label,
                "min_abs_eigenvalue": r.min_abs_eigenvalue,
                "min_t": r.min_t,
                "min_label": r.min_label,
            })
        }
        CheckKind::Semigroup => {
            serde_json::to_value(is_semigroup(gpc_only(ch, "semigroup")?, grid))?
        }
        CheckKind::DephasingSet => {
            serde_json::to_value(in_dephasing_set(gpc_only(ch, "dephasing-set")?))?
        }
        CheckKind::Rates => {
            let prof = decoherence_rates(gpc_only(ch, "rates")?, grid);
            if format == Format::Csv {
                let mut header = vec!["t".to_string()];
                header.extend((1..=prof.gamma.len()).map(|a| format!("gamma_{a}")));
                let rows = (0..prof.times.len()).map(|i| {
                    let mut r = vec![prof.times[i]];
                    r.extend(prof.gamma.iter().map(|g| g[i]));
                    r
                });
                return csv_text(&header, rows);
            }
            serde_json::to_value(&prof)?
        }
        CheckKind::PDivisible => {
            let prof = decoherence_rates(gpc_only(ch, "p-divisible")?, grid);
            let mut r = serde_json::to_value(pdivisibility_rate_check(&prof))?;
            r["pole_times"] = json!(prof.pole_times);
            r
        }
        CheckKind::NegCount => {
            let prof = decoherence_rates(gpc_only(ch, "neg-count")?, grid);
            json!({"count": permanently_negative_count(&prof), "bound": ch.dim() - 1, "pole_times": prof.pole_times})
        }
    };
    let name = serde_json::to_value(which_name(which))?;
    if let Value::Object(map) = &mut v {
        let mut out = serde_json::Map::new();
        out.insert("schema_version".into(), json!(SCHEMA_VERSION));
        out.insert("check".into(), name);
        out.append(map);
        v = Value::Object(out);
    }
    Ok(to_json(&v))
}

fn which_name(which: CheckKind) -> &'static str {
    match which {
        CheckKind::Cp => "cp",
        CheckKind::Invertible => "invertible",
        CheckKind::Semigroup => "semigroup",
        CheckKind::DephasingSet => "dephasing-set",
        CheckKind::Rates => "rates",
        CheckKind::PDivisible => "p-divisible",
        CheckKind::NegCount => "neg-count",
    }
}
