//! The `macias` command line.
//!
//! Exit codes: 0 on success, 1 when a verification finds violations (or an
//! `--with-oracle` cross-check disagrees), 2 on usage and parse errors.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};

use crate::enumeration::{enumerate_elements, enumerate_prime_classes, Window};
use crate::error::{Error, Result};
use crate::homeo;
use crate::invariants::{self, OpennessVerdict};
use crate::oracle;
use crate::rings::{Cardinal, Element, RingId};
use crate::topology;

pub const SCHEMA: &str = "macias-report/1";

#[derive(Parser, Debug)]
#[command(name = "macias", version, about = "Macias topology workbench")]
struct Cli {
    /// Ring: Z, GF(p)[x], Z[i], Z_(p), Z[1/p,q,...], Z[x]
    #[arg(short = 'r', long, global = true, default_value = "Z")]
    ring: String,

    /// Window height bound
    #[arg(short = 'w', long, global = true, default_value_t = 100)]
    window: u64,

    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,

    /// Cross-check results against the brute-force oracles
    #[arg(long, global = true)]
    with_oracle: bool,

    /// Worker threads for window sweeps (default: all cores)
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
    Dot,
}

#[derive(Args, Debug, Clone)]
struct Pair {
    #[arg(long)]
    from: String,
    #[arg(long)]
    to: String,
}

#[derive(Subcommand, Debug)]
enum HomeoCommand {
    /// Print H(E)
    Map {
        #[command(flatten)]
        rings: Pair,
        #[arg(long, allow_hyphen_values = true)]
        element: String,
        /// Apply the inverse map instead
        #[arg(long)]
        inverse: bool,
    },
    /// Verify H on the source window
    Verify {
        #[command(flatten)]
        rings: Pair,
        /// Source window bound (defaults to --window)
        #[arg(long)]
        bound: Option<u64>,
    },
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Unit and prime invariants of the ring
    RingInfo,
    /// Prime factorization up to a unit
    Factor {
        #[arg(allow_hyphen_values = true)]
        element: String,
    },
    /// Prime support of an element
    Support {
        #[arg(allow_hyphen_values = true)]
        element: String,
    },
    /// Whether s lies in the basic open of k
    Member {
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
    },
    /// Closure of a singleton, with its members in the window
    Closure {
        #[arg(allow_hyphen_values = true)]
        element: String,
    },
    /// A prime dividing x but not y
    Witness {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
    },
    /// Specialization graph of the window
    Graph,
    /// Density certificate for the primes
    Density,
    /// Openness certificate for the unit group
    UnitsOpen,
    /// Semiprimitivity verdict
    Semiprimitive,
    /// Window elements grouped by support
    Partition,
    /// Decide homeomorphism by the invariant pair
    Classify(Pair),
    /// Apply or verify the explicit homeomorphism
    #[command(subcommand)]
    Homeo(HomeoCommand),
    /// Same as `homeo map`
    HomeoMap {
        #[command(flatten)]
        rings: Pair,
        #[arg(long, allow_hyphen_values = true)]
        element: String,
        #[arg(long)]
        inverse: bool,
    },
    /// Same as `homeo verify`
    HomeoVerify {
        #[command(flatten)]
        rings: Pair,
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Window-level evidence that two spaces are not homeomorphic
    Certificate(Pair),
    /// The Z[x] example of disjoint supports without comaximality
    CounterexampleZx,
    /// All window certificates for the ring in one report
    Report,
}

/// Result of one command before rendering.
struct Outcome {
    text: String,
    json: Json,
    dot: Option<String>,
    failed: bool,
}

impl Outcome {
    fn new(text: impl Into<String>, json: Json) -> Outcome {
        Outcome {
            text: text.into(),
            json,
            dot: None,
            failed: false,
        }
    }

    fn failed_if(mut self, failed: bool) -> Outcome {
        self.failed |= failed;
        self
    }
}

/// Parses arguments, runs one command and writes its output. Returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let result = match cli.workers {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => Err(Error::SizeLimit(format!("thread pool: {e}"))),
        },
        None => dispatch(&cli),
    };
    match result {
        Ok(outcome) => {
            let rendered = render(&cli, &outcome);
            let _ = out.write_all(rendered.as_bytes());
            i32::from(outcome.failed)
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn render(cli: &Cli, outcome: &Outcome) -> String {
    match cli.output {
        Output::Text => with_newline(outcome.text.clone()),
        Output::Dot => match &outcome.dot {
            Some(d) => d.clone(),
            None => with_newline(outcome.text.clone()),
        },
        Output::Json => {
            let mut v = outcome.json.clone();
            if let Json::Object(map) = &mut v {
                map.insert("schema".into(), json!(SCHEMA));
                map.insert("command".into(), json!(command_name(&cli.command)));
            }
            with_newline(serde_json::to_string_pretty(&v).expect("JSON values serialize"))
        }
    }
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::RingInfo => "ring-info",
        Command::Factor { .. } => "factor",
        Command::Support { .. } => "support",
        Command::Member { .. } => "member",
        Command::Closure { .. } => "closure",
        Command::Witness { .. } => "witness",
        Command::Graph => "graph",
        Command::Density => "density",
        Command::UnitsOpen => "units-open",
        Command::Semiprimitive => "semiprimitive",
        Command::Partition => "partition",
        Command::Classify(_) => "classify",
        Command::Homeo(HomeoCommand::Map { .. }) | Command::HomeoMap { .. } => "homeo-map",
        Command::Homeo(HomeoCommand::Verify { .. }) | Command::HomeoVerify { .. } => "homeo-verify",
        Command::Certificate(_) => "certificate",
        Command::CounterexampleZx => "counterexample-zx",
        Command::Report => "report",
    }
}

fn join(xs: &[Element]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    if let Command::CounterexampleZx = cli.command {
        return counterexample();
    }
    let pair = |p: &Pair| -> Result<(RingId, RingId)> { Ok((p.from.parse()?, p.to.parse()?)) };
    match &cli.command {
        Command::Classify(p) => {
            let (a, b) = pair(p)?;
            let v = homeo::classify(&a, &b)?;
            return Ok(Outcome::new(v.to_string(), v.to_json(&a, &b)));
        }
        Command::Homeo(HomeoCommand::Map { rings, element, inverse })
        | Command::HomeoMap { rings, element, inverse } => {
            let (a, b) = pair(rings)?;
            return homeo_map(&a, &b, element, *inverse);
        }
        Command::Homeo(HomeoCommand::Verify { rings, bound }) | Command::HomeoVerify { rings, bound } => {
            let (a, b) = pair(rings)?;
            return homeo_verify(&a, &b, bound.unwrap_or(cli.window), cli.with_oracle);
        }
        Command::Certificate(p) => {
            let (a, b) = pair(p)?;
            let ws = enumerate_elements(&a, cli.window)?;
            let wt = enumerate_elements(&b, cli.window)?;
            let c = homeo::non_homeo_certificate(&a, &b, &ws, &wt)?;
            let mut text = format!("{} vs {}: {} differ ({})\n", a, b, c.invariant, c.quantity);
            for p in &c.series {
                text += &format!("  bound {}: {} vs {}\n", p.bound, p.source, p.target);
            }
            return Ok(Outcome::new(text, c.to_json()).failed_if(!c.differs_at_every_bound));
        }
        _ => {}
    }

    let ring: RingId = cli.ring.parse()?;
    let el = |s: &str| Element::parse(&ring, s);
    let window = || enumerate_elements(&ring, cli.window);
    match &cli.command {
        Command::RingInfo => ring_info(&ring),
        Command::Factor { element } => factor(&el(element)?, cli.with_oracle),
        Command::Support { element } => {
            let x = el(element)?;
            let s = topology::support(&x)?;
            Ok(Outcome::new(s.to_string(), json!({ "ring": ring, "element": x, "support": s })))
        }
        Command::Member { k, s } => member(&el(k)?, &el(s)?, cli.with_oracle),
        Command::Closure { element } => closure(&el(element)?, &window()?, cli.with_oracle),
        Command::Witness { x, y } => {
            let w = topology::separating_witness(&el(x)?, &el(y)?)?;
            let text = w.as_ref().map_or("none".to_string(), |p| p.to_string());
            Ok(Outcome::new(text, json!({ "ring": ring, "x": x, "y": y, "witness": w })))
        }
        Command::Graph => {
            let g = topology::specialization_graph(&window()?)?;
            let text: String = g
                .edges
                .iter()
                .map(|(a, b)| format!("{} -> {}\n", g.nodes[*a], g.nodes[*b]))
                .collect();
            let mut json = g.to_json();
            json["ring"] = json!(ring);
            json["window_bound"] = json!(cli.window);
            let mut o = Outcome::new(text, json);
            o.dot = Some(g.to_dot());
            Ok(o)
        }
        Command::Density => {
            let d = invariants::prime_density(&ring, &window()?)?;
            let text = if d.dense_certified {
                format!("dense-certified ({}/{} generators witnessed)", d.witnessed(), d.records.len())
            } else {
                format!(
                    "not dense ({}/{} generators witnessed; no prime in sigma_alpha: {})",
                    d.witnessed(),
                    d.records.len(),
                    d.empty_open.as_ref().is_some_and(|(_, ok)| *ok)
                )
            };
            Ok(Outcome::new(text, d.to_json()))
        }
        Command::UnitsOpen => {
            let r = invariants::units_openness(&ring, &window()?)?;
            Ok(Outcome::new(openness_text(&r), r.to_json()).failed_if(r.violations() > 0))
        }
        Command::Semiprimitive => {
            let v = invariants::semiprimitivity(&ring)?;
            let text = match &v.jacobson_witness {
                None => "semiprimitive".to_string(),
                Some(j) => format!("not semiprimitive (Jacobson witness {j})"),
            };
            let json = json!({
                "ring": ring,
                "verdict": if v.semiprimitive { "semiprimitive" } else { "not-semiprimitive" },
                "records": [v],
            });
            Ok(Outcome::new(text, json).failed_if(!v.consistent))
        }
        Command::Partition => {
            let w = window()?;
            let blocks = invariants::support_partition(&w)?;
            let text: String = blocks
                .iter()
                .map(|(s, xs)| format!("{s}: {}\n", join(xs)))
                .collect();
            Ok(Outcome::new(text, invariants::partition_json(&w, &blocks)))
        }
        Command::Report => report(&ring, &window()?, cli.with_oracle),
        _ => unreachable!("handled above"),
    }
}

fn ring_info(ring: &RingId) -> Result<Outcome> {
    let units = ring.units_cardinality();
    let primes = ring.primes_cardinality();
    let first = match primes {
        Ok(Cardinal::Finite(n)) => enumerate_prime_classes(ring, n.min(10))?,
        Ok(Cardinal::CountablyInfinite) => enumerate_prime_classes(ring, 10)?,
        Err(_) => Vec::new(),
    };
    let first: Vec<Element> = first.iter().map(|c| c.representative().clone()).collect();
    let listed = ring.list_units().filter(|u| u.len() <= 16);
    let primes_text = primes.as_ref().map_or("unsupported".to_string(), |c| c.to_string());
    let mut text = format!(
        "ring: {ring}\npid: {}\nunits: {units}\nprimes: {primes_text}\n",
        ring.is_pid()
    );
    if let Some(us) = &listed {
        text += &format!("unit list: {}\n", join(us));
    }
    if !first.is_empty() {
        text += &format!("first primes: {}\n", join(&first));
    }
    let json = json!({
        "ring": ring,
        "pid": ring.is_pid(),
        "units": units,
        "primes": primes.ok(),
        "unit_list": listed,
        "first_primes": first,
    });
    Ok(Outcome::new(text, json))
}

fn factor(x: &Element, with_oracle: bool) -> Result<Outcome> {
    let d = x.factor()?;
    let mut parts = vec![d.unit.to_string()];
    for (p, e) in &d.factors {
        let rep = p.representative().to_string();
        let rep = if rep.contains(['+', '-']) { format!("({rep})") } else { rep };
        parts.push(if *e == 1 { rep } else { format!("{rep}^{e}") });
    }
    let factors: Vec<Json> = d
        .factors
        .iter()
        .map(|(p, e)| json!({ "prime": p, "index": p.index().ok(), "exponent": e }))
        .collect();
    let mut json = json!({ "ring": x.ring(), "element": x, "unit": d.unit, "factors": factors });
    let mut failed = false;
    let mut text = format!("{x} = {}", parts.join(" * "));
    if with_oracle {
        let (u, fs) = oracle::oracle_factor(x)?;
        let agree = u == d.unit
            && fs.len() == d.factors.len()
            && fs.iter().zip(&d.factors).all(|((a, e), (b, f))| a == b.representative() && e == f);
        failed = !agree;
        json["oracle_agrees"] = json!(agree);
        text += &format!("\noracle agrees: {agree}");
    }
    Ok(Outcome::new(text, json).failed_if(failed))
}

fn member(k: &Element, s: &Element, with_oracle: bool) -> Result<Outcome> {
    let inside = topology::in_basic_open(s, k)?;
    let mut json = json!({ "ring": k.ring(), "k": k, "s": s, "member": inside });
    let mut text = inside.to_string();
    let mut failed = false;
    if with_oracle {
        let bound = oracle::default_bound(k, s)?;
        let o = oracle::oracle_coprime(k, s, bound)?;
        failed = o != inside;
        json["oracle"] = json!({ "bound": bound, "member": o });
        text += &format!("\noracle (bound {bound}): {o}");
    }
    Ok(Outcome::new(text, json).failed_if(failed))
}

fn closure(x: &Element, w: &Window, with_oracle: bool) -> Result<Outcome> {
    let d = topology::closure_singleton(x)?;
    let members = topology::closure_members(x, w)?;
    let mut json = json!({
        "ring": w.ring,
        "window_bound": w.bound,
        "element": x,
        "closure": d,
        "members": members,
    });
    let mut text = format!("{d}\nmembers in window ({}): {}", members.len(), join(&members));
    let mut failed = false;
    if with_oracle {
        let upper = oracle::oracle_closure_upper(x, w, &oracle::WitnessPool::from_window(w))?;
        failed = upper != members;
        json["oracle_agrees"] = json!(!failed);
        text += &format!("\noracle agrees: {}", !failed);
    }
    Ok(Outcome::new(text, json).failed_if(failed))
}

fn openness_text(r: &invariants::OpennessReport) -> String {
    match &r.verdict {
        OpennessVerdict::UnitsOpen {
            alpha,
            members_checked,
            non_unit_members,
            ..
        } => format!(
            "units open: alpha = {alpha} ({members_checked} window members of sigma_alpha, {} non-units)",
            non_unit_members.len()
        ),
        OpennessVerdict::UnitsNotOpenCertified { records } => format!(
            "units not open: certified for {}/{} generators",
            records.iter().filter(|r| r.ok).count(),
            records.len()
        ),
    }
}

fn homeo_map(a: &RingId, b: &RingId, literal: &str, inverse: bool) -> Result<Outcome> {
    let h = homeo::build_homeo(a, b)?;
    let (x, y) = if inverse {
        let y = Element::parse(b, literal)?;
        (homeo::apply_homeo_inverse(&h, &y)?, y)
    } else {
        let x = Element::parse(a, literal)?;
        let y = homeo::apply_homeo(&h, &x)?;
        (x, y)
    };
    let (shown_in, shown_out) = if inverse { (&y, &x) } else { (&x, &y) };
    let json = json!({
        "source": a,
        "target": b,
        "inverse": inverse,
        "input": shown_in,
        "output": shown_out,
    });
    Ok(Outcome::new(shown_out.to_string(), json))
}

fn homeo_verify(a: &RingId, b: &RingId, bound: u64, with_oracle: bool) -> Result<Outcome> {
    let h = homeo::build_homeo(a, b)?;
    let w = enumerate_elements(a, bound)?;
    let r = homeo::verify_homeo(&h, &w)?;
    let mut json = r.to_json();
    let mut failed = !r.passed();
    let mut text = format!(
        "{} -> {}: {} ({} violations over {} elements, {} pairs)",
        a,
        b,
        if r.passed() { "verified" } else { "violated" },
        r.total_violations(),
        r.elements,
        r.pairs
    );
    if with_oracle {
        // every image must again be a valid target element with the same
        // number of prime factors counted by trial division
        let mut agree = true;
        for x in &w.elements {
            let hx = homeo::apply_homeo(&h, x)?;
            let (_, fs) = oracle::oracle_factor(x)?;
            let (_, gs) = oracle::oracle_factor(&hx)?;
            let ex: Vec<u32> = fs.iter().map(|f| f.1).collect();
            let ey: Vec<u32> = gs.iter().map(|g| g.1).collect();
            let mut ex_sorted = ex.clone();
            let mut ey_sorted = ey.clone();
            ex_sorted.sort_unstable();
            ey_sorted.sort_unstable();
            agree &= ex_sorted == ey_sorted;
        }
        failed |= !agree;
        json["oracle_exponents_agree"] = json!(agree);
        text += &format!("\noracle exponent profiles agree: {agree}");
    }
    Ok(Outcome::new(text, json).failed_if(failed))
}

fn counterexample() -> Result<Outcome> {
    let r = topology::zx_counterexample()?;
    let mut text = format!(
        "ring: {}\nk = {}, s = {}\nk prime: {}, s prime: {}\nsupports_disjoint: {}\ncoprime: {}\n\
         constant terms of all generators even: {}\noracle_coprime (degree bound {}): {}\n",
        r.ring,
        r.k,
        r.s,
        r.k_is_prime,
        r.s_is_prime,
        r.supports_disjoint,
        r.coprime,
        r.generators_constant_terms_even,
        r.oracle_bound,
        r.oracle_coprime
    );
    for c in &r.sanity {
        let cof = c
            .cofactors
            .as_ref()
            .map_or("none".to_string(), |(a, b)| format!("1 = ({a})*({}) + ({b})*({})", c.k, c.s));
        text += &format!("coprime({}, {}) = {} (oracle {}; {cof})\n", c.k, c.s, c.coprime, c.oracle_coprime);
    }
    let consistent = r.supports_disjoint
        && !r.coprime
        && !r.oracle_coprime
        && r.generators_constant_terms_even
        && r.sanity.iter().all(|c| c.coprime == c.oracle_coprime);
    let json = serde_json::to_value(&r).expect("report serializes");
    Ok(Outcome::new(text, json).failed_if(!consistent))
}

fn report(ring: &RingId, w: &Window, with_oracle: bool) -> Result<Outcome> {
    let semi = invariants::semiprimitivity(ring)?;
    let openness = invariants::units_openness(ring, w)?;
    let density = invariants::prime_density(ring, w)?;
    let maximal = invariants::maximal_closure_report(w)?;
    let eq = invariants::equivalence_report(ring, w)?;
    let blocks = invariants::support_partition(w)?;
    let (units, primes) = invariants::classification_invariants(ring)?;
    let partition: Vec<Json> = blocks
        .iter()
        .map(|(s, xs)| json!({ "support": s, "size": xs.len() }))
        .collect();
    let violations = openness.violations() + maximal.violations() + eq.violations + usize::from(!eq.consistent());
    let mut records = vec![
        json!({ "kind": "semiprimitivity", "report": semi }),
        json!({ "kind": "units-openness", "report": openness.to_json() }),
        json!({ "kind": "prime-density", "report": density.to_json() }),
        json!({ "kind": "maximal-closures", "report": maximal.to_json() }),
        json!({ "kind": "support-partition", "blocks": partition }),
        json!({ "kind": "equivalence", "report": eq }),
    ];
    let mut oracle_disagreements = 0;
    if with_oracle {
        for x in &w.elements {
            let d = x.factor()?;
            let (u, fs) = oracle::oracle_factor(x)?;
            let same = u == d.unit
                && fs.len() == d.factors.len()
                && fs.iter().zip(&d.factors).all(|((a, e), (b, f))| a == b.representative() && e == f);
            oracle_disagreements += usize::from(!same);
        }
        records.push(json!({ "kind": "oracle-factor", "disagreements": oracle_disagreements }));
    }
    let verdict = if violations + oracle_disagreements == 0 { "verified" } else { "violated" };
    let json = json!({
        "ring": ring,
        "window_bound": w.bound,
        "verdict": verdict,
        "invariants": { "units": units, "primes": primes },
        "records": records,
    });
    let text = format!(
        "ring: {ring}\nwindow bound: {} ({} elements)\nunits: {units}, primes: {primes}\n{}\n{}\n\
         density: {} ({}/{})\nmaximal proper singleton closures: {}\nequivalence consistent: {}\nverdict: {verdict}",
        w.bound,
        w.len(),
        if semi.semiprimitive { "semiprimitive".to_string() } else { "not semiprimitive".to_string() },
        openness_text(&openness),
        if density.dense_certified { "dense-certified" } else { "not dense" },
        density.witnessed(),
        density.records.len(),
        maximal.maximal.len(),
        eq.consistent(),
    );
    Ok(Outcome::new(text, json).failed_if(verdict != "verified"))
}
