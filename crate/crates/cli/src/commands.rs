use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use ndude_core::baselines::{
    corrupt, forward_backward_denoise, generate_source, HmmSpec, MarkovSource,
};
use ndude_core::dude::dude_assignment;
use ndude_core::evaluation::{self, true_loss, KRecord};
use ndude_core::neural::{save_checkpoint_with, train};
use ndude_core::{EstimatedLossTables, ExperimentReport, Method, Sequence};
use serde_json::{json, Map, Value};

use crate::data::{self, Layout};
use crate::spec::{noise_seed, Model};
use crate::{
    DenoiseArgs, DenoiseMethod, EvalArgs, SimulateArgs, SweepArgs, SweepMethod, UsageError,
};

type Provenance = Vec<(&'static str, String)>;

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn summary_json(fields: &Provenance, extra: Map<String, Value>) -> String {
    let mut map = Map::new();
    for (k, v) in fields {
        map.insert((*k).into(), Value::String(v.clone()));
    }
    map.extend(extra);
    let mut s = serde_json::to_string_pretty(&Value::Object(map)).expect("JSON values serialize");
    s.push('\n');
    s
}

fn error_rate(x: &Sequence, y: &Sequence) -> Result<f64> {
    if x.is_empty() {
        return Ok(0.0);
    }
    Ok(x.hamming_distance(y)? as f64 / x.len() as f64)
}

fn load_clean(path: Option<&Path>, model: &Model, len: usize) -> Result<Option<Sequence>> {
    let Some(path) = path else { return Ok(None) };
    let clean = data::load(path, &model.alphabet)?.seq;
    if clean.len() != len {
        bail!(
            "clean sequence {} has {} symbols, noisy has {len}",
            path.display(),
            clean.len()
        );
    }
    Ok(Some(clean))
}

fn ratio_line(model: &Model, ber: f64) -> String {
    match model.delta {
        Some(d) if d > 0.0 => format!(" ber/delta={:.4}", ber / d),
        _ => String::new(),
    }
}

pub fn simulate(args: SimulateArgs) -> Result<()> {
    let model = args.channel.resolve()?;
    let fingerprint = ndude_core::channel::fingerprint(&model.channel, &model.loss);
    let mut prov: Provenance = vec![
        ("channel", model.label.clone()),
        ("fingerprint", fingerprint),
    ];

    let (clean, layout) = if let Some(source) = &args.source {
        let src = source.resolve(args.seed)?;
        if src.alphabet().as_ref() != model.alphabet.as_ref() {
            bail!(
                "source alphabet {} differs from channel alphabet {}",
                src.alphabet(),
                model.alphabet
            );
        }
        let n = args
            .n
            .ok_or_else(|| usage("--n is required with --source"))?;
        prov.push(("source", source.label()));
        prov.push(("n", n.to_string()));
        (generate_source(&src, n)?, Layout::Text)
    } else {
        let path = args
            .image
            .as_ref()
            .or(args.input.as_ref())
            .expect("clap enforces one input");
        let loaded = data::load(path, &model.alphabet)?;
        (loaded.seq, loaded.layout)
    };
    let nseed = noise_seed(args.seed);
    prov.push(("seed", args.seed.to_string()));
    prov.push(("noise_seed", nseed.to_string()));
    let noisy = corrupt(&clean, &model.channel, nseed)?;
    let flips = error_rate(&clean, &noisy)?;

    if let Some(path) = &args.clean_out {
        let mut p = prov.clone();
        p.push(("role", "clean".into()));
        data::save(path, &clean, &layout, &p)?;
    }
    let mut p = prov;
    p.push(("role", "noisy".into()));
    p.push(("flip_rate", format!("{flips:.6}")));
    data::save(&args.output, &noisy, &layout, &p)?;
    println!("n={} flip_rate={flips:.6}", noisy.len());
    Ok(())
}

fn fb_source(args: &DenoiseArgs, model: &Model) -> Result<MarkovSource> {
    match (&args.source, &model.transition) {
        (Some(spec), _) => spec.resolve(0),
        (None, Some(t)) => Ok(MarkovSource::new(model.alphabet.clone(), t.clone(), 0)?),
        (None, None) => Err(usage(
            "fb needs --source or a model file with a transition matrix",
        )),
    }
}

pub fn denoise(args: DenoiseArgs) -> Result<()> {
    let model = args.channel.resolve()?;
    let tables = EstimatedLossTables::build(&model.channel, &model.loss)?;
    let input = data::load(&args.input, &model.alphabet)?;
    let z = &input.seq;
    let clean = load_clean(args.clean.as_deref(), &model, z.len())?;
    if args.checkpoint.is_some() && args.method != DenoiseMethod::Ndude {
        return Err(usage("--checkpoint only applies to --method ndude"));
    }

    let cfg = args.train.config();
    let mut prov: Provenance = vec![
        ("channel", model.label.clone()),
        ("fingerprint", tables.fingerprint().to_string()),
        ("seed", args.train.seed.to_string()),
    ];
    let start = Instant::now();
    let (xhat, k, est) = match args.method {
        DenoiseMethod::Dude => {
            let k = args.k.expect("clap requires k");
            prov.push(("method", "dude".into()));
            let a = dude_assignment(z, k, &tables)?;
            (
                a.reconstruct(z, &tables)?,
                Some(k),
                Some(a.estimated_loss(z, &tables)?),
            )
        }
        DenoiseMethod::Ndude => {
            let k = args.k.expect("clap requires k");
            let method = Method::Neural {
                arch: args.train.arch.clone(),
                cfg: cfg.clone(),
            };
            prov.push(("method", method.to_string()));
            let (net, _) = train::<f32>(z, k, &tables, &args.train.arch, &cfg)?;
            let a = net.assignment(z)?;
            if let Some(path) = &args.checkpoint {
                save_checkpoint_with(&net, path, &prov)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            (
                a.reconstruct(z, &tables)?,
                Some(k),
                Some(a.estimated_loss(z, &tables)?),
            )
        }
        DenoiseMethod::Fb => {
            let source = fb_source(&args, &model)?;
            prov.push(("method", "fb".into()));
            let spec = HmmSpec::new(source, model.channel.clone())?;
            (forward_backward_denoise(z, &spec, &model.loss)?, None, None)
        }
    };
    let elapsed = (!args.no_timing).then(|| start.elapsed().as_secs_f64());
    let truth = clean
        .as_ref()
        .map(|x| true_loss(x, &xhat, &model.loss))
        .transpose()?;
    if let Some(k) = k {
        prov.push(("k", k.to_string()));
    }

    data::save(&args.output, &xhat, &input.layout, &prov)?;
    if let Some(path) = &args.report {
        write_denoise_report(path, &prov, k, est, truth, elapsed)?;
    }
    if let Some(path) = &args.summary {
        let mut extra = Map::new();
        extra.insert(
            "estimated_loss".into(),
            est.map_or(Value::Null, Value::from),
        );
        extra.insert("true_ber".into(), truth.map_or(Value::Null, Value::from));
        if let Some(t) = elapsed {
            extra.insert("wall_time_s".into(), t.into());
        }
        write_text(path, &summary_json(&prov, extra))?;
    }

    let mut line = format!("n={}", z.len());
    if let Some(k) = k {
        line += &format!(" k={k}");
    }
    if let Some(e) = est {
        line += &format!(" estimated_loss={e:.6}");
    }
    if let Some(t) = truth {
        line += &format!(" true_ber={t:.6}{}", ratio_line(&model, t));
    }
    if let Some(t) = elapsed {
        line += &format!(" wall_time_s={t:.3}");
    }
    println!("{line}");
    Ok(())
}

fn write_denoise_report(
    path: &Path,
    prov: &Provenance,
    k: Option<usize>,
    est: Option<f64>,
    truth: Option<f64>,
    elapsed: Option<f64>,
) -> Result<()> {
    let opt = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
    let mut out = String::new();
    for (key, value) in prov {
        out += &format!("# {key}: {value}\n");
    }
    out += "k,estimated_loss,true_ber,wall_time_s\n";
    out += &format!(
        "{},{},{},{}\n",
        k.map(|k| k.to_string()).unwrap_or_default(),
        opt(est),
        opt(truth),
        opt(elapsed)
    );
    write_text(path, &out)
}

pub fn sweep(args: SweepArgs) -> Result<()> {
    let model = args.channel.resolve()?;
    let tables = EstimatedLossTables::build(&model.channel, &model.loss)?;
    let seed = args.train.seed;
    let mut prov: Provenance = vec![("channel", model.label.clone()), ("seed", seed.to_string())];

    let (z, layout, clean) = if let Some(path) = &args.image {
        let image = data::load(path, &model.alphabet)?;
        let nseed = noise_seed(seed);
        prov.push(("noise_seed", nseed.to_string()));
        let z = corrupt(&image.seq, &model.channel, nseed)?;
        if let Some(out) = &args.noisy_out {
            let mut p = prov.clone();
            p.push(("fingerprint", tables.fingerprint().to_string()));
            p.push(("role", "noisy".into()));
            data::save(out, &z, &image.layout, &p)?;
        }
        (z, image.layout, Some(image.seq))
    } else {
        let input = data::load(
            args.input.as_ref().expect("clap enforces one input"),
            &model.alphabet,
        )?;
        let clean = load_clean(args.clean.as_deref(), &model, input.seq.len())?;
        (input.seq, input.layout, clean)
    };

    let ks: Vec<usize> = match (&args.k, args.kmax) {
        (Some(ks), _) => ks.clone(),
        (None, Some(kmax)) => (1..=kmax).collect(),
        (None, None) => unreachable!("clap enforces --k or --kmax"),
    };
    if ks.is_empty() {
        return Err(usage("--kmax must be at least 1"));
    }
    let method = match args.method {
        SweepMethod::Dude => Method::Dude,
        SweepMethod::Ndude => Method::Neural {
            arch: args.train.arch.clone(),
            cfg: args.train.config(),
        },
    };
    let show_time = !args.no_timing;
    let outcome = evaluation::sweep(
        &z,
        &ks,
        &tables,
        &model.loss,
        &method,
        clean.as_ref(),
        |r: &KRecord| {
            let mut line = format!("k={} estimated_loss={:.6}", r.k, r.estimated_loss);
            if let Some(t) = r.true_ber {
                line += &format!(" true_ber={t:.6}");
            }
            if let (true, Some(t)) = (show_time, r.wall_time_s) {
                line += &format!(" wall_time_s={t:.3}");
            }
            eprintln!("{line}");
        },
    )?;
    let report: ExperimentReport = if show_time {
        outcome.report
    } else {
        outcome.report.without_timing()
    };

    if let Some(path) = &args.report {
        let file = File::create(path).with_context(|| format!("writing {}", path.display()))?;
        let mut w = BufWriter::new(file);
        report.write_csv(&mut w, &prov)?;
        w.flush()?;
    }
    if let Some(path) = &args.summary {
        write_text(path, &report.summary_json(&prov)?)?;
    }
    if let Some(path) = &args.output {
        let mut p = prov.clone();
        p.push(("method", report.method.clone()));
        p.push(("fingerprint", report.fingerprint.clone()));
        p.push(("k", report.k_star.to_string()));
        data::save(path, &outcome.reconstruction, &layout, &p)?;
    }

    let best = report.best();
    let mut line = format!(
        "k_star={} estimated_loss={:.6}",
        report.k_star, best.estimated_loss
    );
    if let Some(t) = best.true_ber {
        line += &format!(" true_ber={t:.6}{}", ratio_line(&model, t));
    }
    println!("{line}");
    Ok(())
}

pub fn eval(args: EvalArgs) -> Result<()> {
    let model = args.channel.resolve()?;
    let input = data::load(&args.input, &model.alphabet)?;
    let clean = load_clean(Some(&args.clean), &model, input.seq.len())?.expect("path given");
    let loss = true_loss(&clean, &input.seq, &model.loss)?;
    let errors = clean.hamming_distance(&input.seq)?;
    println!(
        "n={} errors={errors} loss={loss:.6}{}",
        clean.len(),
        ratio_line(&model, loss)
    );
    if let Some(path) = &args.summary {
        let prov: Provenance = vec![
            ("channel", model.label.clone()),
            (
                "fingerprint",
                ndude_core::channel::fingerprint(&model.channel, &model.loss),
            ),
        ];
        let extra = json!({ "n": clean.len(), "errors": errors, "loss": loss });
        let Value::Object(extra) = extra else {
            unreachable!()
        };
        write_text(path, &summary_json(&prov, extra))?;
    }
    Ok(())
}
