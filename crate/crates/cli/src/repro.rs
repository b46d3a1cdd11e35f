//! Worked examples and seeded property corpora, each asserting reference
//! values as named anchors.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use gpauli::analysis::{
    decoherence_rates, decompose_s2_into_d2, in_dephasing_set, invertibility, is_semigroup,
    mixture_of_semigroups_is_semigroup, pdivisibility_rate_check, permanently_negative_count,
    sd_not_in_dd_witness, semigroup_from_rates, split_semigroup_invertible, AnalysisError,
};
use gpauli::catalog::{oscillating_qubit, qutrit_weyl_pair};
use gpauli::channels::{channel_equal, choi_cp_at, fa_cp_at, mix_gpc};
use gpauli::io::{save_channel, ChannelSpec, SCHEMA_VERSION};
use gpauli::mub::mub_family;
use gpauli::qlinalg::{hermitian_eig, CMat};
use gpauli::{Channel, EqualityMode, GpcChannel, Grid, MubFamily};

use crate::args::{GlobalOpts, ReproName};
use crate::corpus::Corpus;
use crate::{grid_of, spectrum_columns, to_json};

#[derive(Debug, Clone, Serialize)]
pub struct Anchor {
    pub name: String,
    pub expected: Value,
    pub observed: Value,
    pub pass: bool,
}

impl Anchor {
    pub fn new(name: &str, expected: impl Serialize, observed: impl Serialize, pass: bool) -> Self {
        Anchor {
            name: name.to_string(),
            expected: serde_json::to_value(expected).expect("serializable"),
            observed: serde_json::to_value(observed).expect("serializable"),
            pass,
        }
    }

    fn close(name: &str, expected: f64, observed: f64, tol: f64) -> Self {
        Anchor::new(
            name,
            json!({"value": expected, "tol": tol}),
            observed,
            (observed - expected).abs() <= tol,
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub schema_version: u32,
    pub repro: String,
    pub anchors: Vec<Anchor>,
    pub files: Vec<String>,
    pub all_pass: bool,
}

struct Writer<'a> {
    dir: &'a Path,
    files: Vec<String>,
}

impl Writer<'_> {
    fn text(&mut self, name: &str, text: &str) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn json(&mut self, name: &str, value: &impl Serialize) -> Result<()> {
        self.text(name, &to_json(value))
    }

    fn channel(&mut self, name: &str, ch: &Channel<f64>) -> Result<()> {
        save_channel(&self.dir.join(name), ch, "builtin")?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn csv(
        &mut self,
        name: &str,
        header: &[String],
        rows: impl Iterator<Item = Vec<f64>>,
    ) -> Result<()> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header)?;
        for r in rows {
            w.write_record(r.iter().map(|x| x.to_string()))?;
        }
        self.text(name, &String::from_utf8(w.into_inner()?)?)
    }
}

fn mubs(d: usize) -> Result<Arc<MubFamily>> {
    Ok(Arc::new(mub_family(d)?))
}

/// Runs one reproduction, writing its files and `summary.json` into `dir`.
pub fn run(name: &ReproName, opts: &GlobalOpts, dir: &Path) -> Result<Summary> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut w = Writer {
        dir,
        files: Vec::new(),
    };
    let (label, anchors) = match name {
        ReproName::Fig1 => {
            let grid = match opts.grid {
                Some(_) => grid_of(opts)?,
                None => Grid::new(2.0 * PI, 629)?,
            };
            ("fig1", fig1(&mut w, &grid)?)
        }
        ReproName::Eq13Membership => ("eq13-membership", eq13_membership(&mut w)?),
        ReproName::Example1 => ("example1", example1(&mut w, &grid_of(opts)?)?),
        ReproName::Prop4Qubit { c } => ("prop4-qubit", prop4_qubit(&mut w, &c.0, &grid_of(opts)?)?),
        ReproName::Prop4Qudit { d } => ("prop4-qudit", prop4_qudit(&mut w, *d, &grid_of(opts)?)?),
        ReproName::SplitN { n, d } => ("split-n", split_n(&mut w, *n, *d, &grid_of(opts)?)?),
        ReproName::Properties { samples } => {
            let mut corpus = Corpus::new(opts.seed);
            let anchors = properties(&mut corpus, *samples)?;
            w.json(
                "properties.json",
                &json!({"schema_version": SCHEMA_VERSION, "seed": opts.seed, "samples": samples}),
            )?;
            ("properties", anchors)
        }
    };
    let mut files = w.files;
    files.push("summary.json".into());
    let summary = Summary {
        schema_version: SCHEMA_VERSION,
        repro: label.into(),
        all_pass: anchors.iter().all(|a| a.pass),
        anchors,
        files,
    };
    fs::write(dir.join("summary.json"), to_json(&summary))?;
    Ok(summary)
}

fn fig1(w: &mut Writer, grid: &Grid) -> Result<Vec<Anchor>> {
    let ch = oscillating_qubit(mubs(2)?);
    let header: Vec<String> = ["t", "p_0", "p_1", "p_2", "p_3"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    w.csv(
        "fig1.csv",
        &header,
        grid.points().map(|t| {
            let mut r = vec![t];
            r.extend(ch.p_at(t));
            r
        }),
    )?;
    let chan = Channel::Gpc(ch.clone());
    let (labels, _, at) = spectrum_columns(&chan);
    let mut sh = vec!["t".to_string()];
    sh.extend(labels);
    w.csv(
        "fig1_spectrum.csv",
        &sh,
        grid.points().map(|t| {
            let mut r = vec![t];
            r.extend(at(t));
            r
        }),
    )?;
    let (t_peak, peak) =
        grid.points()
            .map(|t| (t, ch.p_at(t)[1]))
            .fold(
                (0.0, f64::NEG_INFINITY),
                |a, b| if b.1 > a.1 { b } else { a },
            );
    Ok(vec![
        Anchor::close("p_1 peak value", 0.5, peak, 1e-9),
        Anchor::close("p_1 peak time", PI, t_peak, grid.step() / 2.0 + 1e-12),
    ])
}

fn eq13_membership(w: &mut Writer) -> Result<Vec<Anchor>> {
    let ch = oscillating_qubit(mubs(2)?);
    w.channel("eq13.json", &Channel::Gpc(ch.clone()))?;
    let m = in_dephasing_set(&ch);
    w.json(
        "membership.json",
        &json!({"schema_version": SCHEMA_VERSION, "membership": m}),
    )?;
    Ok(vec![
        Anchor::close("sup_sum", 13.0 / 12.0, m.sup_sum, 1e-9),
        Anchor::new("member", false, m.member, !m.member),
    ])
}

fn example1(w: &mut Writer, grid: &Grid) -> Result<Vec<Anchor>> {
    let (p, q, mix) = qutrit_weyl_pair();
    let (p, q, mix) = (Channel::Weyl(p), Channel::Weyl(q), Channel::Weyl(mix));
    w.channel("example1_p.json", &p)?;
    w.channel("example1_q.json", &q)?;
    w.channel("example1_mix.json", &mix)?;
    let (rp, rq, rm) = (
        invertibility(&p, grid),
        invertibility(&q, grid),
        invertibility(&mix, grid),
    );
    let ln5 = 5f64.ln();
    let cp = choi_cp_at(&mix, [ln5]);
    w.json(
        "invertibility.json",
        &json!({"schema_version": SCHEMA_VERSION, "p": rp, "q": rq, "mix": rm, "mix_cp_at_first_zero": cp}),
    )?;
    let zero = rm.first_zero.unwrap_or(f64::NAN);
    Ok(vec![
        Anchor::new("p invertible", true, rp.invertible, rp.invertible),
        Anchor::new("q invertible", true, rq.invertible, rq.invertible),
        Anchor::new("mixture invertible", false, rm.invertible, !rm.invertible),
        Anchor::close("mixture first_zero", ln5, zero, 1e-6),
        Anchor::new("mixture CP at ln 5", true, cp.is_cp(), cp.is_cp()),
    ])
}

/// Decomposes the qubit semigroup with rates `c` and checks the recombination.
pub fn prop4_qubit_anchors(c: &[f64], grid: &Grid) -> Result<(Vec<Anchor>, Value)> {
    let m = mubs(2)?;
    let arr: [f64; 3] = c.try_into().map_err(|_| AnalysisError::RateCount {
        expected: 3,
        found: c.len(),
    })?;
    let sg = semigroup_from_rates(m.clone(), c)?;
    let dec = decompose_s2_into_d2(arr)?;
    let rec = dec.reconstruct(&m, grid)?;
    let exact = channel_equal(
        &Channel::Gpc(sg),
        &Channel::Gpc(rec),
        EqualityMode::Symbolic,
        grid,
    );
    let certificate = json!({
        "c": c,
        "weights": dec.weights,
        "order": dec.order,
        "pi": dec.pi.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
        "reconstructs": exact,
    });
    let anchors = vec![
        Anchor::new(
            "weights",
            [0.5, 0.25, 0.25],
            dec.weights,
            dec.weights == [0.5, 0.25, 0.25],
        ),
        Anchor::new("symbolic reconstruction", true, exact, exact),
    ];
    Ok((anchors, certificate))
}

fn prop4_qubit(w: &mut Writer, c: &[f64], grid: &Grid) -> Result<Vec<Anchor>> {
    let (anchors, cert) = prop4_qubit_anchors(c, grid)?;
    w.json(
        "decomposition.json",
        &json!({"schema_version": SCHEMA_VERSION, "decomposition": cert}),
    )?;
    Ok(anchors)
}

fn prop4_qudit(w: &mut Writer, d: usize, grid: &Grid) -> Result<Vec<Anchor>> {
    let wit = sd_not_in_dd_witness(&mubs(d)?, grid)?;
    if let Some(ch) = &wit.channel {
        w.channel("witness_channel.json", &Channel::Gpc(ch.clone()))?;
    }
    w.json(
        "witness.json",
        &json!({"schema_version": SCHEMA_VERSION, "witness": wit}),
    )?;
    Ok(vec![
        Anchor::new(
            "c in (0, 1)",
            "0 < c < 1",
            wit.c,
            wit.c > 0.0 && wit.c < 1.0,
        ),
        Anchor::new("is_semigroup", true, wit.is_semigroup, wit.is_semigroup),
        Anchor::new(
            "sup_sum > 1 + 1e-9",
            "> 1.000000001",
            wit.sup_sum,
            wit.sup_sum > 1.0 + 1e-9,
        ),
    ])
}

/// Splits the all-rates-one semigroup into `n` invertible channels and checks
/// weights, invertibility, recombination and the single semigroup component.
pub fn split_n_anchors(
    n: usize,
    d: usize,
    grid: &Grid,
) -> Result<(Vec<Anchor>, Value, Vec<GpcChannel>)> {
    let split = split_semigroup_invertible(mubs(d)?, n)?;
    let mut expected_w: Vec<f64> = (1..n).map(|k| 0.5f64.powi(k as i32)).collect();
    expected_w.push(0.5f64.powi(n as i32 - 1));
    let weights_ok = split.weights == expected_w;
    let inv: Vec<bool> = split
        .channels
        .iter()
        .map(|c| invertibility(&Channel::Gpc(c.clone()), grid).invertible)
        .collect();
    let rec = mix_gpc(&split.channels.iter().collect::<Vec<_>>(), &split.weights)?;
    let exact = channel_equal(
        &Channel::Gpc(split.base.clone()),
        &Channel::Gpc(rec),
        EqualityMode::Symbolic,
        grid,
    );
    let want_rate = 2f64.powi(n as i32 - 1);
    let verdicts: Vec<_> = split
        .channels
        .iter()
        .map(|c| is_semigroup(c, grid))
        .collect();
    let semigroups: Vec<usize> = verdicts
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_semigroup)
        .map(|(i, _)| i)
        .collect();
    let rate_ok = semigroups.len() == 1
        && verdicts[semigroups[0]]
            .rates
            .as_ref()
            .is_some_and(|r| r.iter().all(|c| (c - want_rate).abs() <= 1e-9));
    let cert = json!({
        "n": n,
        "d": d,
        "weights": split.weights,
        "components": split.channels.iter().map(|c| ChannelSpec::from_channel(&Channel::Gpc(c.clone()), "builtin")).collect::<Vec<_>>(),
        "invertible": inv,
        "reconstructs": exact,
        "semigroup_components": semigroups,
        "semigroup_rates": verdicts.iter().map(|v| v.rates.clone()).collect::<Vec<_>>(),
    });
    let anchors = vec![
        Anchor::new("weights", &expected_w, &split.weights, weights_ok),
        Anchor::new(
            "all components invertible",
            true,
            inv.iter().all(|b| *b),
            inv.iter().all(|b| *b),
        ),
        Anchor::new("symbolic reconstruction", true, exact, exact),
        Anchor::new(
            "single semigroup component",
            json!({"count": 1, "rate": want_rate}),
            json!({"indices": semigroups}),
            rate_ok,
        ),
    ];
    Ok((anchors, cert, split.channels))
}

fn split_n(w: &mut Writer, n: usize, d: usize, grid: &Grid) -> Result<Vec<Anchor>> {
    let (anchors, cert, _) = split_n_anchors(n, d, grid)?;
    w.json(
        "split.json",
        &json!({"schema_version": SCHEMA_VERSION, "split": cert}),
    )?;
    Ok(anchors)
}

// ---------------------------------------------------------------- property corpora

/// All property anchors with `samples` draws each.
pub fn properties(corpus: &mut Corpus, samples: usize) -> Result<Vec<Anchor>> {
    let mut out = vec![semigroup_round_trip(corpus, samples, &[2, 3, 5])?];
    out.push(invertible_mixtures(corpus, samples, &[2, 3])?);
    out.push(semigroup_mixtures(corpus, samples)?);
    out.push(qubit_decompositions(corpus, samples)?);
    out.push(semigroup_rates(corpus, samples)?);
    out.push(pdivisible_mixtures(corpus, samples)?);
    out.push(negative_rate_bound(corpus, samples)?);
    out.push(eternal_pair_count()?);
    out.push(cp_oracle_agreement(corpus, samples, 50)?);
    out.push(spectrum_oracle(corpus, samples, 50)?);
    Ok(out)
}

/// Valid rates are recovered by the semigroup test; violating rates are
/// rejected by the constructor.
pub fn semigroup_round_trip(corpus: &mut Corpus, n: usize, dims: &[usize]) -> Result<Anchor> {
    let grid = Grid::default();
    let mut max_err = 0.0f64;
    let mut misses = 0;
    for _ in 0..n {
        let d = corpus.pick(dims);
        let c = corpus.valid_rates(d);
        let ch = semigroup_from_rates(corpus.mubs(d), &c)?;
        let v = is_semigroup(&ch, &grid);
        match (&v.rates, v.is_semigroup) {
            (Some(r), true) => {
                max_err = r
                    .iter()
                    .zip(&c)
                    .map(|(a, b)| (a - b).abs())
                    .fold(max_err, f64::max);
            }
            _ => misses += 1,
        }
    }
    let mut accepted = 0;
    for _ in 0..n {
        let d = corpus.pick(dims);
        let c = corpus.violating_rates(d);
        match semigroup_from_rates(corpus.mubs(d), &c) {
            Err(AnalysisError::RateInequalityViolated { .. }) => {}
            Err(e) => return Err(e.into()),
            Ok(ch) => {
                let negative = grid
                    .points()
                    .any(|t| ch.p_at(t).iter().any(|&x| x < -1e-12));
                if !negative {
                    accepted += 1;
                }
            }
        }
    }
    Ok(Anchor::new(
        "semigroup round trip",
        json!({"max_rate_error": 1e-8, "misses": 0, "violating_accepted": 0}),
        json!({"max_rate_error": max_err, "misses": misses, "violating_accepted": accepted}),
        max_err <= 1e-8 && misses == 0 && accepted == 0,
    ))
}

/// Convex mixtures of invertible channels stay invertible.
pub fn invertible_mixtures(corpus: &mut Corpus, n: usize, dims: &[usize]) -> Result<Anchor> {
    let grid = Grid::default();
    let mut failures = 0;
    for _ in 0..n {
        let d = corpus.pick(dims);
        let k = corpus.pick(&[2usize, 3, 4]);
        let parts: Vec<GpcChannel> = (0..k).map(|_| corpus.invertible_gpc(d)).collect();
        let w = corpus.weights(k);
        let m = mix_gpc(&parts.iter().collect::<Vec<_>>(), &w)?;
        if !invertibility(&Channel::Gpc(m), &grid).invertible {
            failures += 1;
        }
    }
    Ok(Anchor::new(
        "mixtures of invertible channels invertible",
        json!({"failures": 0}),
        json!({"failures": failures}),
        failures == 0,
    ))
}

/// Nontrivial mixtures of distinct semigroups are not semigroups.
pub fn semigroup_mixtures(corpus: &mut Corpus, n: usize) -> Result<Anchor> {
    let grid = Grid::default();
    let mut failures = 0;
    let mut trivial = 0;
    for _ in 0..n {
        let d = corpus.pick(&[2usize, 3]);
        let k = corpus.pick(&[2usize, 3]);
        let (parts, w, _) = corpus.mixture_of_semigroups(d, k);
        let r = mixture_of_semigroups_is_semigroup(&parts.iter().collect::<Vec<_>>(), &w, &grid)?;
        if !r.nontrivial {
            trivial += 1;
        } else if r.is_semigroup {
            failures += 1;
        }
    }
    Ok(Anchor::new(
        "mixtures of distinct semigroups are not semigroups",
        json!({"failures": 0, "trivial": 0}),
        json!({"failures": failures, "trivial": trivial}),
        failures == 0 && trivial == 0,
    ))
}

/// Every qubit semigroup recombines from three dephasing channels.
pub fn qubit_decompositions(corpus: &mut Corpus, n: usize) -> Result<Anchor> {
    let grid = Grid::default();
    let mut failures = Vec::new();
    for _ in 0..n {
        let c = corpus.valid_rates(2);
        let (anchors, _) = prop4_qubit_anchors(&c, &grid)?;
        if anchors.iter().any(|a| !a.pass) {
            failures.push(c);
        }
    }
    Ok(Anchor::new(
        "qubit semigroup decompositions",
        json!({"failures": []}),
        json!({"failures": failures}),
        failures.is_empty(),
    ))
}

/// Semigroup rates equal `Σc/d - c_α` pointwise.
pub fn semigroup_rates(corpus: &mut Corpus, n: usize) -> Result<Anchor> {
    let grid = Grid::default();
    let mut max_err = 0.0f64;
    for _ in 0..n {
        let d = corpus.pick(&[2usize, 3, 5]);
        let c = corpus.valid_rates(d);
        let prof = decoherence_rates(&semigroup_from_rates(corpus.mubs(d), &c)?, &grid);
        let total: f64 = c.iter().sum::<f64>() / d as f64;
        for (a, row) in prof.gamma.iter().enumerate() {
            for g in row.iter().filter(|g| !g.is_nan()) {
                max_err = max_err.max((g - (total - c[a])).abs());
            }
        }
    }
    Ok(Anchor::new(
        "semigroup rates closed form",
        json!({"max_error": 1e-8}),
        json!({"max_error": max_err}),
        max_err <= 1e-8,
    ))
}

/// Mixtures of semigroups satisfy the rate-sum condition.
pub fn pdivisible_mixtures(corpus: &mut Corpus, n: usize) -> Result<Anchor> {
    let grid = Grid::default();
    let mut failures = 0;
    for _ in 0..n {
        let d = corpus.pick(&[2usize, 3]);
        let k = corpus.pick(&[2usize, 3]);
        let (_, _, m) = corpus.mixture_of_semigroups(d, k);
        if !pdivisibility_rate_check(&decoherence_rates(&m, &grid)).overall {
            failures += 1;
        }
    }
    Ok(Anchor::new(
        "rate sums of semigroup mixtures nonnegative",
        json!({"failures": 0}),
        json!({"failures": failures}),
        failures == 0,
    ))
}

/// At most `d - 1` rates are negative for all `t > 0`.
pub fn negative_rate_bound(corpus: &mut Corpus, n: usize) -> Result<Anchor> {
    let grid = Grid::default();
    let mut worst = Vec::new();
    let mut violations = 0;
    for i in 0..n {
        let d = corpus.pick(&[2usize, 3]);
        let ch = if i % 2 == 0 {
            corpus.semigroup(d)
        } else {
            corpus.mixture_of_semigroups(d, 2).2
        };
        let count = permanently_negative_count(&decoherence_rates(&ch, &grid));
        if count > d - 1 {
            violations += 1;
        }
        worst.push(count);
    }
    let max = worst.iter().copied().max().unwrap_or(0);
    Ok(Anchor::new(
        "permanently negative rates at most d-1",
        json!({"violations": 0}),
        json!({"violations": violations, "max_count": max}),
        violations == 0,
    ))
}

/// `½ e^{(1,1,0)} + ½ e^{(1,0,1)}` on a qubit has exactly one permanently
/// negative rate.
pub fn eternal_pair_count() -> Result<Anchor> {
    let grid = Grid::default();
    let m = mubs(2)?;
    let a = semigroup_from_rates(m.clone(), &[1.0, 1.0, 0.0])?;
    let b = semigroup_from_rates(m, &[1.0, 0.0, 1.0])?;
    let mix = mix_gpc(&[&a, &b], &[0.5, 0.5])?;
    let count = permanently_negative_count(&decoherence_rates(&mix, &grid));
    Ok(Anchor::new(
        "qubit two-semigroup mixture negative count",
        1,
        count,
        count == 1,
    ))
}

/// The Fujiwara-Algoet test and the Choi spectrum agree channel by channel
/// and time by time.
pub fn cp_oracle_agreement(corpus: &mut Corpus, n: usize, times: usize) -> Result<Anchor> {
    let grid = Grid::default();
    let ts = grid.sample(times);
    let mut disagreements = 0;
    let mut not_cp = 0;
    for i in 0..n {
        let d = corpus.pick(&[2usize, 3, 5]);
        let ch = match i % 3 {
            0 => corpus.semigroup(d),
            1 => corpus.mixture_of_semigroups(d, 2).2,
            _ => corpus.arbitrary_gpc(d),
        };
        let spec = ch.spectrum();
        let chan = Channel::Gpc(ch);
        for &t in &ts {
            let fa = fa_cp_at(&spec, [t]).is_cp();
            let choi = choi_cp_at(&chan, [t]).is_cp();
            if fa != choi {
                disagreements += 1;
            }
            if !choi {
                not_cp += 1;
            }
        }
    }
    Ok(Anchor::new(
        "Fujiwara-Algoet test agrees with Choi spectrum",
        json!({"disagreements": 0}),
        json!({"disagreements": disagreements, "checked": n * ts.len(), "not_cp": not_cp}),
        disagreements == 0,
    ))
}

/// Sorted eigenvalues of the Hermitian and anti-Hermitian parts of a normal
/// superoperator matrix.
fn normal_spectrum(m: &CMat<f64>) -> Result<(Vec<f64>, Vec<f64>)> {
    let adj = m.adjoint();
    let n = m.rows();
    let re = CMat::from_fn(n, n, |i, j| {
        (m.as_slice()[i * n + j] + adj.as_slice()[i * n + j]) * 0.5
    });
    let im = CMat::from_fn(n, n, |i, j| {
        (m.as_slice()[i * n + j] - adj.as_slice()[i * n + j]) * num_complex::Complex::new(0.0, -0.5)
    });
    let mut a = hermitian_eig(&re)?.values;
    let mut b = hermitian_eig(&im)?.values;
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    Ok((a, b))
}

/// Closed-form spectra match the eigenvalues of the numerically built
/// superoperator.
pub fn spectrum_oracle(corpus: &mut Corpus, n: usize, times: usize) -> Result<Anchor> {
    let grid = Grid::default();
    let ts = grid.sample(times);
    let mut max_err = 0.0f64;
    for i in 0..n {
        let d = corpus.pick(&[2usize, 3, 5]);
        let ch: Channel<f64> = if i % 2 == 0 {
            corpus.arbitrary_gpc(d).into()
        } else {
            corpus.weyl(d, true).into()
        };
        for &t in &ts {
            let mut want: Vec<(f64, f64)> = match &ch {
                Channel::Gpc(g) => {
                    let l = g.spectrum().at(t);
                    let mut v = vec![(1.0, 0.0)];
                    for x in l {
                        v.extend(std::iter::repeat_n((x, 0.0), d - 1));
                    }
                    v
                }
                Channel::Weyl(w) => w
                    .spectrum()
                    .at(t)
                    .into_iter()
                    .map(|z| (z.re, z.im))
                    .collect(),
            };
            let (re, im) = normal_spectrum(ch.superop_at(t).matrix())?;
            let mut wr: Vec<f64> = want.iter().map(|z| z.0).collect();
            let mut wi: Vec<f64> = want.drain(..).map(|z| z.1).collect();
            wr.sort_by(f64::total_cmp);
            wi.sort_by(f64::total_cmp);
            for (a, b) in re.iter().zip(&wr).chain(im.iter().zip(&wi)) {
                max_err = max_err.max((a - b).abs());
            }
        }
    }
    Ok(Anchor::new(
        "closed-form spectra match superoperator",
        json!({"max_error": 1e-10}),
        json!({"max_error": max_err}),
        max_err <= 1e-10,
    ))
}
