//! `fullshift` — reproducible experiments over full groups of Z^d subshifts,
//! exact interval exchanges, and the Penrose transversal model.
//!
//! Every verb prints a short human summary to stdout and, with `--report`,
//! writes a machine-readable JSON report. Verbs that emit a JSON artifact
//! (composed elements, windows) print the artifact instead when no output
//! file is given. Randomized verbs are fully deterministic in `--seed`.
//!
//! Exit codes: 0 all checks pass, 1 a verification failed (counterexample in
//! the report), 2 a resource or precision cap was hit, 3 bad input.

mod report;
mod svg;

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use fullshift::error::{CoreError, Result};
use fullshift::fullgroup::{
    compose, equals, order, piece_table_from_json, piece_table_to_json, PieceTable,
};
use fullshift::iet::{
    iet_compose, iet_order, interval_five_set, validate_iet, AngleBasis, IetMap,
};
use fullshift::lattice::{ball_points, LatticeVector};
use fullshift::penrose::{
    element_validate, f_move, faces, local_rule_check, sample_xi, snf_quotient, vertices, Cyclo,
    GroupElementP, PatchSpec, TilingWindow, TransversalPoint,
};
use fullshift::subshift::{backend_from_spec, patch_from_json, patch_to_json, SubshiftOracle};
use fullshift::theorems::altgen::{altgen_closure, eval_b_word, factor_three_cycle, word_index};
use fullshift::theorems::fiveset::five_set_identity;
use fullshift::theorems::generators::{enumerate_t_r, generator_table};
use fullshift::theorems::incompat::{
    a_set_l1, incompatibility_radius, radius_counterexample, RadiusOutcome,
};
use fullshift::theorems::perm::Perm;
use fullshift::theorems::synthesize::Synthesizer;

use report::{CheckRecord, RunReport};

#[derive(Parser)]
#[command(
    name = "fullshift",
    version,
    about = "Workbench for full groups of Z^d subshifts, interval exchange groups, and the Penrose transversal"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,

    /// Seed for every randomized draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Cap on admissible-patch enumeration per support.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    cap_enum: usize,

    /// Cap on iterated composition when computing orders.
    #[arg(long, global = true, default_value_t = 512)]
    cap_order: u64,

    /// Cap on flattened word length in synthesis.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    cap_flat: usize,

    /// Disk cache directory for subshift enumerations
    /// (falls back to $FULLSHIFT_CACHE_DIR).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    /// Write the machine-readable run report here.
    #[arg(long, global = true)]
    report: Option<PathBuf>,

    /// Record wall-clock timings in the report. Off by default so that equal
    /// runs produce byte-identical reports.
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand)]
enum Verb {
    /// Least radius making every nonzero shift in an L1 ball incompatible.
    R1 {
        /// Backend: `chair` or `full:<d>:<alphabet>`.
        #[arg(long, default_value = "chair")]
        shift: String,
        /// The shift set is all g with 0 < |g|_1 <= maxlen.
        #[arg(long, default_value_t = 3)]
        maxlen: i64,
        /// Largest radius to try before giving up.
        #[arg(long, default_value_t = 12)]
        cap: u32,
    },
    /// Randomized checks of the disjoint-union commutator identity.
    VerifyCorollary {
        /// Valid instances to verify (split across default backends when
        /// --shift is not given).
        #[arg(long, default_value_t = 200)]
        count: usize,
        /// Restrict to one backend instead of {full:1, full:2, chair}.
        #[arg(long)]
        shift: Option<String>,
    },
    /// Enumerate the finite generating family at a radius.
    Generators {
        #[arg(long)]
        radius: u32,
        #[arg(long, default_value = "chair")]
        shift: String,
    },
    /// Express generators at radius `to` as verified words over radius `from`.
    Synthesize {
        #[arg(long)]
        from: u32,
        /// Must be `from + 1`; synthesis walks one radius at a time.
        #[arg(long)]
        to: u32,
        #[arg(long, default_value = "chair")]
        shift: String,
        /// How many targets to synthesize.
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
    /// Alternating-group generator checks on words over a 3-letter alphabet.
    Altgen {
        /// Word length.
        #[arg(long)]
        d: usize,
        /// Compute the closure order of the one-position family (d=2 only).
        #[arg(long)]
        closure: bool,
        /// Factor a 3-cycle given as three comma-separated words, e.g.
        /// `aab,cba,bbc` (letters a-c or digits 0-2).
        #[arg(long)]
        factorize: Option<String>,
    },
    /// Compose two serialized full-group elements (outer first: A then B
    /// means A after B).
    Compose {
        a: PathBuf,
        b: PathBuf,
        /// Write the composed element here instead of stdout.
        #[arg(long, short = 'o')]
        out: Option<PathBuf>,
        /// Backend override; defaults to the files' own backend field.
        #[arg(long)]
        shift: Option<String>,
    },
    /// Order of a serialized full-group element.
    Order {
        a: PathBuf,
        #[arg(long)]
        shift: Option<String>,
    },
    /// Exact equality of two serialized full-group elements.
    Equal {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        shift: Option<String>,
    },
    /// Interval-exchange verbs over a square-root angle basis.
    Iet {
        #[command(subcommand)]
        cmd: IetCmd,
    },
    /// Penrose transversal verbs.
    Penrose {
        #[command(subcommand)]
        cmd: PenroseCmd,
    },
    /// Render a serialized window or chair patch as SVG.
    Render {
        /// A tiling window JSON (as written by `penrose vertices -o`).
        #[arg(long)]
        window: Option<PathBuf>,
        /// A chair patch JSON.
        #[arg(long)]
        chair_patch: Option<PathBuf>,
        #[arg(long)]
        svg: PathBuf,
    },
}

#[derive(Subcommand)]
enum IetCmd {
    /// Compose two serialized interval exchanges (first argument acts last).
    Compose {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, short = 'o')]
        out: Option<PathBuf>,
        /// Angle basis, e.g. `sqrt:2,3`.
        #[arg(long, default_value = "sqrt:2,3")]
        basis: String,
    },
    /// Order of a serialized interval exchange.
    Order {
        a: PathBuf,
        #[arg(long, default_value = "sqrt:2,3")]
        basis: String,
    },
    /// Randomized checks of the disjoint-union commutator identity on arcs.
    VerifyCorollary {
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value = "sqrt:2,3")]
        basis: String,
    },
}

#[derive(Subcommand)]
enum PenroseCmd {
    /// Enumerate the vertex window around a transversal parameter.
    Vertices {
        /// Parameter as inline JSON (five `p/q` strings) or a file path;
        /// defaults to a built-in non-singular rational parameter.
        #[arg(long)]
        xi: Option<String>,
        #[arg(long, default_value_t = 4)]
        radius: u32,
        /// Sheet carrying the marked vertex.
        #[arg(long, default_value_t = 1)]
        sheet: u8,
        /// Render the window to this SVG file.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Write the window JSON here.
        #[arg(long, short = 'o')]
        out: Option<PathBuf>,
    },
    /// Smith normal form of the marking-displacement lattice.
    Snf,
    /// Build the partial-rearrangement element moving a patch marking.
    Fmove {
        /// Patch description JSON: vertex offsets plus forbidden offsets.
        #[arg(long)]
        patch: PathBuf,
        /// Source marking: `v1` (1-based) or a 0-based index.
        #[arg(long)]
        from: String,
        /// Target marking, same syntax.
        #[arg(long)]
        to: String,
        #[arg(long, short = 'o')]
        out: Option<PathBuf>,
    },
    /// Validate a serialized element and sample its local displacement rule.
    Check {
        #[arg(long)]
        element: PathBuf,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Signature radius for the local rule.
        #[arg(long, default_value_t = 3)]
        radius: u32,
    },
}

fn main() {
    let cli = Cli::parse();
    let (name, params) = verb_meta(&cli.verb);
    let started = Instant::now();
    let (mut rep, code) = match execute(&cli) {
        Ok(rep) => {
            let code = if rep.verdict == "fail" { 1 } else { 0 };
            (rep, code)
        }
        Err(e) => {
            eprintln!("fullshift: {e}");
            let mut rep = RunReport::new();
            rep.verdict = "error";
            rep.error = Some(json!({ "kind": error_kind(&e), "message": e.to_string() }));
            (rep, exit_code(&e))
        }
    };
    rep.verb = name;
    rep.seed = cli.seed;
    rep.params = params;
    if cli.timings {
        rep.timings_ms = Some(json!({ "total": started.elapsed().as_millis() as u64 }));
    }
    if let Some(path) = &cli.report {
        let mut txt = serde_json::to_string_pretty(&rep).expect("report serializes");
        txt.push('\n');
        if let Err(e) = fs::write(path, txt) {
            eprintln!("fullshift: cannot write report: {e}");
            std::process::exit(3);
        }
    }
    if !rep.quiet {
        for c in &rep.checks {
            println!("[{}] {}", c.verdict, c.name);
        }
        print_flat("counts", &rep.counts);
        print_flat("constants", &rep.constants);
        if let Some(w) = &rep.word_lengths {
            print_flat("word_lengths", w);
        }
        println!("verdict: {}", rep.verdict);
    }
    std::process::exit(code);
}

fn print_flat(label: &str, v: &serde_json::Value) {
    if let serde_json::Value::Object(map) = v {
        for (k, val) in map {
            println!("{label}.{k} = {val}");
        }
    }
}

fn exit_code(e: &CoreError) -> i32 {
    match e {
        CoreError::ResourceCap(_) | CoreError::PrecisionCap { .. } => 2,
        CoreError::VerificationFailed(_) => 1,
        _ => 3,
    }
}

fn error_kind(e: &CoreError) -> &'static str {
    match e {
        CoreError::ResourceCap(_) => "resource-cap",
        CoreError::PrecisionCap { .. } => "precision-cap",
        CoreError::VerificationFailed(_) => "verification-failed",
        CoreError::HypothesisViolation(_) => "hypothesis-violation",
        CoreError::Io(_) => "io",
        CoreError::Json(_) => "json",
        _ => "bad-input",
    }
}

/// Stable (name, params) echo for the report. Output paths are excluded so
/// that runs differing only in artifact destinations stay byte-identical.
fn verb_meta(v: &Verb) -> (String, serde_json::Value) {
    match v {
        Verb::R1 { shift, maxlen, cap } => (
            "r1".into(),
            json!({ "shift": shift, "maxlen": maxlen, "cap": cap }),
        ),
        Verb::VerifyCorollary { count, shift } => (
            "verify-corollary".into(),
            json!({ "count": count, "shift": shift }),
        ),
        Verb::Generators { radius, shift } => (
            "generators".into(),
            json!({ "radius": radius, "shift": shift }),
        ),
        Verb::Synthesize { from, to, shift, count } => (
            "synthesize".into(),
            json!({ "from": from, "to": to, "shift": shift, "count": count }),
        ),
        Verb::Altgen { d, closure, factorize } => (
            "altgen".into(),
            json!({ "d": d, "closure": closure, "factorize": factorize }),
        ),
        Verb::Compose { a, b, shift, .. } => (
            "compose".into(),
            json!({ "a": a.display().to_string(), "b": b.display().to_string(), "shift": shift }),
        ),
        Verb::Order { a, shift } => (
            "order".into(),
            json!({ "a": a.display().to_string(), "shift": shift }),
        ),
        Verb::Equal { a, b, shift } => (
            "equal".into(),
            json!({ "a": a.display().to_string(), "b": b.display().to_string(), "shift": shift }),
        ),
        Verb::Iet { cmd } => match cmd {
            IetCmd::Compose { a, b, basis, .. } => (
                "iet compose".into(),
                json!({ "a": a.display().to_string(), "b": b.display().to_string(), "basis": basis }),
            ),
            IetCmd::Order { a, basis } => (
                "iet order".into(),
                json!({ "a": a.display().to_string(), "basis": basis }),
            ),
            IetCmd::VerifyCorollary { count, basis } => (
                "iet verify-corollary".into(),
                json!({ "count": count, "basis": basis }),
            ),
        },
        Verb::Penrose { cmd } => match cmd {
            PenroseCmd::Vertices { xi, radius, sheet, .. } => (
                "penrose vertices".into(),
                json!({ "xi": xi, "radius": radius, "sheet": sheet }),
            ),
            PenroseCmd::Snf => ("penrose snf".into(), json!({})),
            PenroseCmd::Fmove { patch, from, to, .. } => (
                "penrose fmove".into(),
                json!({ "patch": patch.display().to_string(), "from": from, "to": to }),
            ),
            PenroseCmd::Check { element, samples, radius } => (
                "penrose check".into(),
                json!({ "element": element.display().to_string(), "samples": samples, "radius": radius }),
            ),
        },
        Verb::Render { window, chair_patch, .. } => (
            "render".into(),
            json!({
                "window": window.as_ref().map(|p| p.display().to_string()),
                "chair_patch": chair_patch.as_ref().map(|p| p.display().to_string()),
            }),
        ),
    }
}

fn cache_dir(cli: &Cli) -> Option<PathBuf> {
    cli.cache_dir
        .clone()
        .or_else(|| std::env::var_os("FULLSHIFT_CACHE_DIR").map(PathBuf::from))
}

fn execute(cli: &Cli) -> Result<RunReport> {
    match &cli.verb {
        Verb::R1 { shift, maxlen, cap } => verb_r1(cli, shift, *maxlen, *cap),
        Verb::VerifyCorollary { count, shift } => verb_verify_corollary(cli, *count, shift),
        Verb::Generators { radius, shift } => verb_generators(cli, *radius, shift),
        Verb::Synthesize { from, to, shift, count } => {
            verb_synthesize(cli, *from, *to, shift, *count)
        }
        Verb::Altgen { d, closure, factorize } => verb_altgen(cli, *d, *closure, factorize),
        Verb::Compose { a, b, out, shift } => verb_compose(cli, a, b, out, shift),
        Verb::Order { a, shift } => verb_order(cli, a, shift),
        Verb::Equal { a, b, shift } => verb_equal(cli, a, b, shift),
        Verb::Iet { cmd } => match cmd {
            IetCmd::Compose { a, b, out, basis } => verb_iet_compose(a, b, out, basis),
            IetCmd::Order { a, basis } => verb_iet_order(cli, a, basis),
            IetCmd::VerifyCorollary { count, basis } => verb_iet_corollary(cli, *count, basis),
        },
        Verb::Penrose { cmd } => match cmd {
            PenroseCmd::Vertices { xi, radius, sheet, svg, out } => {
                verb_penrose_vertices(xi, *radius, *sheet, svg, out)
            }
            PenroseCmd::Snf => verb_penrose_snf(),
            PenroseCmd::Fmove { patch, from, to, out } => verb_penrose_fmove(patch, from, to, out),
            PenroseCmd::Check { element, samples, radius } => {
                verb_penrose_check(cli, element, *samples, *radius)
            }
        },
        Verb::Render { window, chair_patch, svg } => verb_render(window, chair_patch, svg),
    }
}

// ---------------------------------------------------------------------------
// subshift verbs
// ---------------------------------------------------------------------------

fn verb_r1(cli: &Cli, shift: &str, maxlen: i64, cap: u32) -> Result<RunReport> {
    if maxlen < 1 {
        return Err(CoreError::BadInput("--maxlen must be >= 1".into()));
    }
    let oracle = backend_from_spec(shift, cache_dir(cli))?;
    let a = a_set_l1(oracle.dim(), maxlen);
    let mut rep = RunReport::new();
    match incompatibility_radius(oracle.as_ref(), &a, cap, cli.cap_enum)? {
        RadiusOutcome::Radius(r) => {
            let at_r = radius_counterexample(oracle.as_ref(), &a, r, cli.cap_enum)?;
            match at_r {
                None => rep
                    .checks
                    .push(CheckRecord::pass("radius-works", json!({ "r": r }))),
                Some((g, w)) => {
                    rep.checks.push(CheckRecord::fail(
                        "radius-works",
                        json!({ "r": r, "g": g, "witness": patch_to_json(&w, oracle.alphabet())? }),
                    ));
                }
            }
            if r == 0 {
                rep.checks.push(CheckRecord::skip(
                    "radius-minimal",
                    json!("r = 0 has no predecessor"),
                ));
            } else {
                match radius_counterexample(oracle.as_ref(), &a, r - 1, cli.cap_enum)? {
                    Some((g, w)) => rep.checks.push(CheckRecord::pass(
                        "radius-minimal",
                        json!({
                            "fails_at": r - 1,
                            "g": g,
                            "witness": patch_to_json(&w, oracle.alphabet())?,
                        }),
                    )),
                    None => rep.checks.push(CheckRecord::fail(
                        "radius-minimal",
                        json!({ "fails_at": r - 1, "witness": null }),
                    )),
                }
            }
            rep.constants = json!({ "r1": r, "shift_set_size": a.len() });
            if !rep.all_passed() {
                rep.verdict = "fail";
                rep.counterexample =
                    Some(json!({ "shift": shift, "maxlen": maxlen, "cap": cap }));
            }
        }
        RadiusOutcome::Obstruction { g, witness } => {
            let adm = oracle.is_admissible(&witness)?;
            rep.checks.push(CheckRecord::pass(
                "obstruction-witnessed",
                json!({
                    "g": g,
                    "witness": patch_to_json(&witness, oracle.alphabet())?,
                    "witness_admissible": adm,
                }),
            ));
            rep.verdict = "obstruction";
            rep.constants = json!({ "r1": null, "shift_set_size": a.len() });
        }
    }
    rep.counts = json!({ "radii_tried": cap });
    Ok(rep)
}

fn random_shift(rng: &mut ChaCha8Rng, d: usize, max: i64) -> LatticeVector {
    loop {
        let v: LatticeVector = (0..d).map(|_| rng.gen_range(-max..=max)).collect();
        if v.iter().any(|&x| x != 0) {
            return v;
        }
    }
}

fn corollary_instances(
    oracle: &dyn SubshiftOracle,
    rng: &mut ChaCha8Rng,
    want: usize,
) -> Result<(usize, usize, Option<serde_json::Value>)> {
    let d = oracle.dim();
    let support = ball_points(d, 2);
    let mut done = 0usize;
    let mut skipped = 0usize;
    let mut tried = 0usize;
    while done < want {
        tried += 1;
        if tried > 500 * want + 500 {
            return Err(CoreError::ResourceCap(format!(
                "no {want} valid instances on {} within {tried} draws",
                oracle.backend_id()
            )));
        }
        let pi1 = oracle.sample_window(rng.gen(), &support)?;
        let pi2 = if rng.gen_bool(0.5) {
            pi1.clone()
        } else {
            oracle.sample_window(rng.gen(), &support)?
        };
        let g1 = random_shift(rng, d, 2);
        let g2 = loop {
            let v = random_shift(rng, d, 2);
            if v != g1 {
                break v;
            }
        };
        let h1 = random_shift(rng, d, 2);
        let h2 = loop {
            let v = random_shift(rng, d, 2);
            if v != h1 {
                break v;
            }
        };
        match five_set_identity(oracle, &pi1, (&g1, &g2), &pi2, (&h1, &h2)) {
            Ok(out) => {
                done += 1;
                if !out.holds {
                    let ce = json!({
                        "backend": oracle.backend_id(),
                        "pi1": patch_to_json(&pi1, oracle.alphabet())?,
                        "g1": g1,
                        "g2": g2,
                        "pi2": patch_to_json(&pi2, oracle.alphabet())?,
                        "h1": h1,
                        "h2": h2,
                    });
                    return Ok((done, skipped, Some(ce)));
                }
            }
            Err(CoreError::HypothesisViolation(_)) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok((done, skipped, None))
}

fn verb_verify_corollary(cli: &Cli, count: usize, shift: &Option<String>) -> Result<RunReport> {
    if count == 0 {
        return Err(CoreError::BadInput("--count must be >= 1".into()));
    }
    let backends: Vec<String> = match shift {
        Some(s) => vec![s.clone()],
        None => vec!["full:1:ab".into(), "full:2:ab".into(), "chair".into()],
    };
    let per = count.div_ceil(backends.len());
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let mut rep = RunReport::new();
    let mut total = 0usize;
    let mut total_skipped = 0usize;
    for spec in &backends {
        let oracle = backend_from_spec(spec, cache_dir(cli))?;
        let (done, skipped, ce) = corollary_instances(oracle.as_ref(), &mut rng, per)?;
        total += done;
        total_skipped += skipped;
        match ce {
            None => rep.checks.push(CheckRecord::pass(
                &format!("cor-patchesunion {spec}"),
                json!({ "instances": done, "skipped": skipped }),
            )),
            Some(ce) => {
                rep.checks.push(CheckRecord::fail(
                    &format!("cor-patchesunion {spec}"),
                    json!({ "instances": done, "skipped": skipped }),
                ));
                rep.verdict = "fail";
                rep.counterexample = Some(ce);
                break;
            }
        }
    }
    rep.counts = json!({ "instances": total, "skipped": total_skipped });
    Ok(rep)
}

fn verb_generators(cli: &Cli, radius: u32, shift: &str) -> Result<RunReport> {
    let oracle = backend_from_spec(shift, cache_dir(cli))?;
    let fam = enumerate_t_r(oracle.as_ref(), radius, cli.cap_enum)?;
    let mut rep = RunReport::new();
    rep.checks.push(CheckRecord::pass(
        "family-enumerated",
        json!({ "generators": fam.generators.len(), "skipped": fam.skipped.len() }),
    ));
    // spot-check: constructed generators are honest 3-cycles
    let sample = fam.generators.len().min(4);
    for (pi, axis) in fam.generators.iter().take(sample) {
        let t = generator_table(oracle.as_ref(), pi, *axis)?;
        let n = order(oracle.as_ref(), &t, 4)?;
        if n != 3 {
            rep.checks.push(CheckRecord::fail(
                "sample-orders",
                json!({ "axis": axis, "order": n, "patch": patch_to_json(pi, oracle.alphabet())? }),
            ));
            rep.verdict = "fail";
            rep.counterexample = Some(json!({
                "shift": shift,
                "radius": radius,
                "patch": patch_to_json(pi, oracle.alphabet())?,
                "axis": axis,
            }));
            return Ok(rep);
        }
    }
    rep.checks.push(CheckRecord::pass(
        "sample-orders",
        json!({ "checked": sample, "order": 3 }),
    ));
    rep.counts = json!({
        "generators": fam.generators.len(),
        "skipped": fam.skipped.len(),
    });
    rep.constants = json!({ "radius": radius });
    Ok(rep)
}

fn verb_synthesize(cli: &Cli, from: u32, to: u32, shift: &str, count: usize) -> Result<RunReport> {
    if to != from + 1 {
        return Err(CoreError::BadInput(
            "synthesis walks one radius at a time; use --to = --from + 1".into(),
        ));
    }
    let oracle = backend_from_spec(shift, cache_dir(cli))?;
    let fam_from = enumerate_t_r(oracle.as_ref(), from, cli.cap_enum)?;
    let fam_to = enumerate_t_r(oracle.as_ref(), to, cli.cap_enum)?;
    if fam_from.generators.is_empty() {
        return Err(CoreError::Precondition(format!(
            "no generators at radius {from}; nothing to synthesize over"
        )));
    }
    let mut synth = Synthesizer::new(oracle.as_ref(), &fam_from, cli.cap_enum)?;
    let targets: Vec<_> = fam_to.generators.iter().take(count).collect();
    let mut flat: Vec<u64> = Vec::with_capacity(targets.len());
    let mut roots: Vec<usize> = Vec::with_capacity(targets.len());
    for (pi, axis) in &targets {
        // synthesize() verifies the factor product against the target exactly
        let s = synth.synthesize(pi, *axis)?;
        flat.push(u64::try_from(s.flat_len).unwrap_or(u64::MAX));
        roots.push(s.roots.len());
    }
    let mut rep = RunReport::new();
    rep.checks.push(CheckRecord::pass(
        "synthesized-verified",
        json!({ "targets": targets.len() }),
    ));
    rep.counts = json!({
        "targets": targets.len(),
        "family_from": fam_from.generators.len(),
        "family_to": fam_to.generators.len(),
        "nodes": synth.nodes.len(),
    });
    rep.constants = json!({ "from": from, "to": to });
    let sum: u64 = flat.iter().sum();
    rep.word_lengths = Some(json!({
        "template_letters": 16,
        "flat": flat,
        "roots": roots,
        "min": flat.iter().min().copied().unwrap_or(0),
        "max": flat.iter().max().copied().unwrap_or(0),
        "mean": if flat.is_empty() { 0.0 } else { sum as f64 / flat.len() as f64 },
    }));
    Ok(rep)
}

// ---------------------------------------------------------------------------
// altgen
// ---------------------------------------------------------------------------

fn parse_base3_word(s: &str, d: usize) -> Result<Vec<u8>> {
    let w: Vec<u8> = s
        .chars()
        .map(|c| match c {
            'a'..='c' => Ok(c as u8 - b'a'),
            '0'..='2' => Ok(c as u8 - b'0'),
            _ => Err(CoreError::BadInput(format!("bad letter {c:?} in word {s:?}"))),
        })
        .collect::<Result<_>>()?;
    if w.len() != d {
        return Err(CoreError::BadInput(format!(
            "word {s:?} has length {}, expected {d}",
            w.len()
        )));
    }
    Ok(w)
}

fn verb_altgen(cli: &Cli, d: usize, closure: bool, factorize: &Option<String>) -> Result<RunReport> {
    if closure == factorize.is_some() {
        return Err(CoreError::BadInput(
            "pass exactly one of --closure or --factorize".into(),
        ));
    }
    let mut rep = RunReport::new();
    if closure {
        if d != 2 {
            return Err(CoreError::BadInput(
                "--closure enumerates a 9!/2-element group; only d=2 is tractable".into(),
            ));
        }
        let n = altgen_closure(d, cli.cap_enum)?;
        let expected: u128 = {
            let points = 3u128.pow(d as u32);
            (1..=points).product::<u128>() / 2
        };
        let ok = n as u128 == expected;
        rep.checks.push(if ok {
            CheckRecord::pass("closure-is-alternating", json!({ "order": n }))
        } else {
            CheckRecord::fail(
                "closure-is-alternating",
                json!({ "order": n, "expected": expected.to_string() }),
            )
        });
        if !ok {
            rep.verdict = "fail";
            rep.counterexample = Some(json!({ "d": d, "order": n }));
        }
        rep.constants = json!({ "closure_order": n, "alternating_order": 181440 });
    } else {
        let spec = factorize.as_ref().expect("checked above");
        let parts: Vec<&str> = spec.split(',').collect();
        if parts.len() != 3 {
            return Err(CoreError::BadInput(
                "expected three comma-separated words, e.g. aab,cba,bbc".into(),
            ));
        }
        let u = parse_base3_word(parts[0], d)?;
        let v = parse_base3_word(parts[1], d)?;
        let w = parse_base3_word(parts[2], d)?;
        let word = factor_three_cycle(d, &u, &v, &w)?;
        // independent recheck on 3^d points
        let n = 3usize.pow(d as u32);
        let target = Perm::three_cycle(n, word_index(&u), word_index(&v), word_index(&w))?;
        let ok = eval_b_word(d, &word) == target;
        rep.checks.push(if ok {
            CheckRecord::pass("word-evaluates-to-cycle", json!({ "letters": word.len() }))
        } else {
            CheckRecord::fail("word-evaluates-to-cycle", json!({ "letters": word.len() }))
        });
        if !ok {
            rep.verdict = "fail";
            rep.counterexample = Some(json!({ "d": d, "cycle": spec }));
        }
        let word_json: Vec<serde_json::Value> = word
            .iter()
            .map(|(l, e)| json!({ "label": l.label(), "exp": e }))
            .collect();
        rep.constants = json!({ "word": word_json });
        rep.word_lengths = Some(json!({ "letters": word.len() }));
    }
    rep.counts = json!({ "d": d });
    Ok(rep)
}

// ---------------------------------------------------------------------------
// piece-table verbs
// ---------------------------------------------------------------------------

fn read_json(path: &PathBuf) -> Result<serde_json::Value> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

fn write_artifact(
    rep: &mut RunReport,
    out: &Option<PathBuf>,
    artifact: &serde_json::Value,
) -> Result<()> {
    let mut txt = serde_json::to_string_pretty(artifact)?;
    txt.push('\n');
    match out {
        Some(path) => fs::write(path, txt)?,
        None => {
            print!("{txt}");
            rep.quiet = true;
        }
    }
    Ok(())
}

fn load_table(
    cli: &Cli,
    path: &PathBuf,
    shift: &Option<String>,
) -> Result<(Box<dyn SubshiftOracle>, PieceTable)> {
    let v = read_json(path)?;
    let spec = match shift {
        Some(s) => s.clone(),
        None => v
            .get("backend")
            .and_then(|x| x.as_str())
            .ok_or_else(|| {
                CoreError::BadInput(format!(
                    "{}: no backend field and no --shift given",
                    path.display()
                ))
            })?
            .to_string(),
    };
    let oracle = backend_from_spec(&spec, cache_dir(cli))?;
    let t = piece_table_from_json(&v, oracle.as_ref())?;
    Ok((oracle, t))
}

fn verb_compose(
    cli: &Cli,
    a: &PathBuf,
    b: &PathBuf,
    out: &Option<PathBuf>,
    shift: &Option<String>,
) -> Result<RunReport> {
    let (oracle, ta) = load_table(cli, a, shift)?;
    let tb = piece_table_from_json(&read_json(b)?, oracle.as_ref())?;
    let tc = compose(oracle.as_ref(), &ta, &tb)?;
    let art = piece_table_to_json(&tc, oracle.as_ref())?;
    let mut rep = RunReport::new();
    rep.counts = json!({
        "pieces_a": ta.pieces.len(),
        "pieces_b": tb.pieces.len(),
        "pieces_out": tc.pieces.len(),
    });
    write_artifact(&mut rep, out, &art)?;
    Ok(rep)
}

fn verb_order(cli: &Cli, a: &PathBuf, shift: &Option<String>) -> Result<RunReport> {
    let (oracle, t) = load_table(cli, a, shift)?;
    let n = order(oracle.as_ref(), &t, cli.cap_order)?;
    let mut rep = RunReport::new();
    rep.checks
        .push(CheckRecord::pass("order-computed", json!({ "order": n })));
    rep.constants = json!({ "order": n });
    rep.counts = json!({ "pieces": t.pieces.len() });
    Ok(rep)
}

fn verb_equal(cli: &Cli, a: &PathBuf, b: &PathBuf, shift: &Option<String>) -> Result<RunReport> {
    let (oracle, ta) = load_table(cli, a, shift)?;
    let tb = piece_table_from_json(&read_json(b)?, oracle.as_ref())?;
    let eq = equals(oracle.as_ref(), &ta, &tb)?;
    let mut rep = RunReport::new();
    rep.constants = json!({ "equal": eq });
    if eq {
        rep.checks.push(CheckRecord::pass("tables-equal", json!({})));
    } else {
        rep.checks.push(CheckRecord::fail("tables-equal", json!({})));
        rep.verdict = "fail";
        rep.counterexample = Some(json!({
            "a": piece_table_to_json(&ta, oracle.as_ref())?,
            "b": piece_table_to_json(&tb, oracle.as_ref())?,
        }));
    }
    Ok(rep)
}

// ---------------------------------------------------------------------------
// iet verbs
// ---------------------------------------------------------------------------

fn parse_basis(spec: &str) -> Result<(AngleBasis, Vec<u64>)> {
    let rest = spec.strip_prefix("sqrt:").ok_or_else(|| {
        CoreError::BadInput(format!("bad basis {spec:?}; expected sqrt:<r1>,<r2>,..."))
    })?;
    let radicands: Vec<u64> = rest
        .split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| CoreError::BadInput(format!("bad radicand {s:?} in {spec:?}")))
        })
        .collect::<Result<_>>()?;
    let basis = AngleBasis::sqrt(radicands.clone())?;
    Ok((basis, radicands))
}

fn load_iet(path: &PathBuf, basis: &AngleBasis) -> Result<IetMap> {
    let t: IetMap = serde_json::from_value(read_json(path)?)?;
    validate_iet(basis, &t)?;
    Ok(t)
}

fn verb_iet_compose(
    a: &PathBuf,
    b: &PathBuf,
    out: &Option<PathBuf>,
    basis: &str,
) -> Result<RunReport> {
    let (basis, _) = parse_basis(basis)?;
    let ta = load_iet(a, &basis)?;
    let tb = load_iet(b, &basis)?;
    let tc = iet_compose(&basis, &ta, &tb)?;
    let mut rep = RunReport::new();
    rep.counts = json!({
        "breakpoints_a": ta.breakpoints.len(),
        "breakpoints_b": tb.breakpoints.len(),
        "breakpoints_out": tc.breakpoints.len(),
    });
    write_artifact(&mut rep, out, &serde_json::to_value(&tc)?)?;
    Ok(rep)
}

fn verb_iet_order(cli: &Cli, a: &PathBuf, basis: &str) -> Result<RunReport> {
    let (basis, _) = parse_basis(basis)?;
    let t = load_iet(a, &basis)?;
    let n = iet_order(&basis, &t, cli.cap_order as usize)?;
    let mut rep = RunReport::new();
    rep.checks
        .push(CheckRecord::pass("order-computed", json!({ "order": n })));
    rep.constants = json!({ "order": n });
    rep.counts = json!({ "breakpoints": t.breakpoints.len() });
    Ok(rep)
}

/// Shift vectors whose arc [0, delta) is short enough that five translates
/// fit in the circle with room to spare; float is a sampling heuristic only.
fn short_arc_deltas(radicands: &[u64]) -> Vec<Vec<i64>> {
    let d = radicands.len();
    let roots: Vec<f64> = radicands.iter().map(|&r| (r as f64).sqrt()).collect();
    let mut out = Vec::new();
    let mut idx = vec![-6i64; d];
    loop {
        let x: f64 = idx.iter().zip(&roots).map(|(&c, r)| c as f64 * r).sum();
        let frac = x - x.floor();
        // positive value (interval ends must follow starts on the line) and
        // a short arc once wrapped
        if x > 0.02 && (0.02..0.17).contains(&frac) {
            out.push(idx.clone());
        }
        let mut k = d;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] <= 6 {
                break;
            }
            idx[k] = -6;
        }
    }
}

fn verb_iet_corollary(cli: &Cli, count: usize, basis_spec: &str) -> Result<RunReport> {
    if count == 0 {
        return Err(CoreError::BadInput("--count must be >= 1".into()));
    }
    let (basis, radicands) = parse_basis(basis_spec)?;
    let d = radicands.len();
    let deltas = short_arc_deltas(&radicands);
    if deltas.is_empty() {
        return Err(CoreError::BadInput(
            "basis admits no short test arcs with small coefficients".into(),
        ));
    }
    let add = |a: &[i64], b: &[i64]| -> Vec<i64> { a.iter().zip(b).map(|(x, y)| x + y).collect() };
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let mut done = 0usize;
    let mut skipped = 0usize;
    let mut tried = 0usize;
    let mut rep = RunReport::new();
    while done < count {
        tried += 1;
        if tried > 500 * count + 500 {
            return Err(CoreError::ResourceCap(format!(
                "no {count} valid arc instances within {tried} draws"
            )));
        }
        let a1: Vec<i64> = (0..d).map(|_| rng.gen_range(-8..=8)).collect();
        let b1 = add(&a1, &deltas[rng.gen_range(0..deltas.len())]);
        let (a2, b2) = if rng.gen_bool(0.5) {
            (a1.clone(), b1.clone())
        } else {
            let a2: Vec<i64> = (0..d).map(|_| rng.gen_range(-8..=8)).collect();
            let b2 = add(&a2, &deltas[rng.gen_range(0..deltas.len())]);
            (a2, b2)
        };
        let g1 = random_shift(&mut rng, d, 3);
        let g2 = loop {
            let v = random_shift(&mut rng, d, 3);
            if v != g1 {
                break v;
            }
        };
        let h1 = random_shift(&mut rng, d, 3);
        let h2 = loop {
            let v = random_shift(&mut rng, d, 3);
            if v != h1 {
                break v;
            }
        };
        match interval_five_set(&basis, (&a1, &b1), (&g1, &g2), (&a2, &b2), (&h1, &h2)) {
            // BadInput here means a drawn arc wraps past 1 (frac(start) >
            // frac(end)); like a hypothesis violation it voids the instance
            Err(CoreError::BadInput(_))
            | Err(CoreError::Overlap(_))
            | Err(CoreError::HypothesisViolation(_)) => skipped += 1,
            Ok(out) => {
                done += 1;
                if !out.holds {
                    rep.checks.push(CheckRecord::fail(
                        "cor-patchesunion arcs",
                        json!({ "instances": done, "skipped": skipped }),
                    ));
                    rep.verdict = "fail";
                    rep.counterexample = Some(json!({
                        "basis": basis_spec,
                        "u1": [a1, b1],
                        "g1": g1,
                        "g2": g2,
                        "u2": [a2, b2],
                        "h1": h1,
                        "h2": h2,
                    }));
                    rep.counts = json!({ "instances": done, "skipped": skipped });
                    return Ok(rep);
                }
            }
            Err(e) => return Err(e),
        }
    }
    rep.checks.push(CheckRecord::pass(
        "cor-patchesunion arcs",
        json!({ "instances": done, "skipped": skipped }),
    ));
    rep.counts = json!({ "instances": done, "skipped": skipped });
    Ok(rep)
}

// ---------------------------------------------------------------------------
// penrose verbs
// ---------------------------------------------------------------------------

fn parse_xi(arg: &Option<String>) -> Result<Cyclo> {
    match arg {
        None => Ok(sample_xi()),
        Some(s) => {
            let txt = if s.trim_start().starts_with('[') {
                s.clone()
            } else {
                fs::read_to_string(s)?
            };
            Ok(serde_json::from_str(&txt)?)
        }
    }
}

fn verb_penrose_vertices(
    xi: &Option<String>,
    radius: u32,
    sheet: u8,
    svg_out: &Option<PathBuf>,
    out: &Option<PathBuf>,
) -> Result<RunReport> {
    let xi = parse_xi(xi)?;
    let p = TransversalPoint::new(sheet, xi);
    p.validate()?;
    let w = vertices(&p, radius)?;
    let fs = faces(&w);
    let thick = fs.iter().filter(|f| f.thick).count();
    let mut rep = RunReport::new();
    rep.checks.push(CheckRecord::pass(
        "window-enumerated",
        json!({ "vertices": w.vertices.len() }),
    ));
    rep.counts = json!({
        "vertices": w.vertices.len(),
        "edges": w.edges.len(),
        "faces": fs.len(),
        "thick": thick,
        "thin": fs.len() - thick,
    });
    rep.constants = json!({ "radius": radius, "sheet": sheet });
    if let Some(path) = svg_out {
        fs::write(path, svg::penrose_window_svg(&w))?;
    }
    if out.is_some() {
        write_artifact(&mut rep, out, &serde_json::to_value(&w)?)?;
    }
    Ok(rep)
}

fn verb_penrose_snf() -> Result<RunReport> {
    let q = snf_quotient();
    let mut rep = RunReport::new();
    rep.checks.push(CheckRecord::pass(
        "quotient-computed",
        json!({ "description": q.description }),
    ));
    rep.constants = serde_json::to_value(&q)?;
    Ok(rep)
}

fn parse_vref(s: &str, n: usize) -> Result<usize> {
    let (digits, one_based) = match s.strip_prefix('v') {
        Some(rest) => (rest, true),
        None => (s, false),
    };
    let k: usize = digits
        .parse()
        .map_err(|_| CoreError::BadInput(format!("bad vertex ref {s:?}")))?;
    let k = if one_based {
        k.checked_sub(1)
            .ok_or_else(|| CoreError::BadInput("v-refs are 1-based; v1 is the first".into()))?
    } else {
        k
    };
    if k >= n {
        return Err(CoreError::BadInput(format!(
            "vertex ref {s:?} out of range; the patch has {n} vertices"
        )));
    }
    Ok(k)
}

fn verb_penrose_fmove(
    patch: &PathBuf,
    from: &str,
    to: &str,
    out: &Option<PathBuf>,
) -> Result<RunReport> {
    let spec: PatchSpec = serde_json::from_value(read_json(patch)?)?;
    let from = parse_vref(from, spec.vertices.len())?;
    let to = parse_vref(to, spec.vertices.len())?;
    let e = f_move(&spec, from, to)?;
    element_validate(&e)?;
    let moving = e
        .pieces
        .iter()
        .filter(|p| p.s != p.s_to || p.v != [0; 5])
        .count();
    let mut rep = RunReport::new();
    rep.checks.push(CheckRecord::pass(
        "element-valid",
        json!({ "pieces": e.pieces.len(), "moving": moving }),
    ));
    rep.counts = json!({ "pieces": e.pieces.len(), "moving": moving });
    write_artifact(&mut rep, out, &serde_json::to_value(&e)?)?;
    Ok(rep)
}

fn verb_penrose_check(
    cli: &Cli,
    element: &PathBuf,
    samples: usize,
    radius: u32,
) -> Result<RunReport> {
    let e: GroupElementP = serde_json::from_value(read_json(element)?)?;
    let mut rep = RunReport::new();
    rep.counts = json!({ "samples": samples, "radius": radius });
    if let Err(err) = element_validate(&e) {
        rep.checks.push(CheckRecord::fail(
            "partition-valid",
            json!({ "reason": err.to_string() }),
        ));
        rep.verdict = "fail";
        rep.counterexample = Some(json!({ "element": serde_json::to_value(&e)? }));
        return Ok(rep);
    }
    rep.checks.push(CheckRecord::pass("partition-valid", json!({})));
    let ok = local_rule_check(&e, radius, samples, cli.seed)?;
    if ok {
        rep.checks.push(CheckRecord::pass(
            "local-rule",
            json!({ "samples": samples, "radius": radius }),
        ));
    } else {
        rep.checks.push(CheckRecord::fail(
            "local-rule",
            json!({ "samples": samples, "radius": radius }),
        ));
        rep.verdict = "fail";
        rep.counterexample = Some(json!({
            "element": serde_json::to_value(&e)?,
            "radius": radius,
            "samples": samples,
            "seed": cli.seed,
        }));
    }
    Ok(rep)
}

fn verb_render(
    window: &Option<PathBuf>,
    chair_patch: &Option<PathBuf>,
    svg_out: &PathBuf,
) -> Result<RunReport> {
    let mut rep = RunReport::new();
    match (window, chair_patch) {
        (Some(path), None) => {
            let w: TilingWindow = serde_json::from_value(read_json(path)?)?;
            let doc = svg::penrose_window_svg(&w);
            fs::write(svg_out, doc)?;
            rep.counts = json!({ "vertices": w.vertices.len(), "faces": faces(&w).len() });
            rep.checks.push(CheckRecord::pass("rendered", json!("window")));
        }
        (None, Some(path)) => {
            let oracle = backend_from_spec("chair", None)?;
            let p = patch_from_json(&read_json(path)?, oracle.alphabet())?;
            let cells: Vec<(i64, i64, usize)> = p
                .cells
                .iter()
                .map(|(q, s)| (q[0], q[1], *s as usize))
                .collect();
            fs::write(svg_out, svg::chair_patch_svg(&cells))?;
            rep.counts = json!({ "cells": cells.len() });
            rep.checks.push(CheckRecord::pass("rendered", json!("chair-patch")));
        }
        _ => {
            return Err(CoreError::BadInput(
                "render takes exactly one of --window or --chair-patch".into(),
            ))
        }
    }
    Ok(rep)
}
