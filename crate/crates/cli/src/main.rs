use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use wai_core::blowup::PointClass;
use wai_core::exactalg::{parse_poly_in, MultiPoly, DEFAULT_MAX_TOWER_DEGREE};
use wai_core::integrability::{candidates_from, finish_darboux, finish_pairing, poincare_bound, poincare_degree, Halt, IntegralCertificate};
use wai_core::linsys::pencil_base_points_with;
use wai_core::reduction::{reduce, ReduceOptions, ReductionResult, DEFAULT_MAX_DEPTH};
use wai_core::vfield::{projectivize, AffineVectorField, ProjectiveOneForm, PROJECTIVE_VARS};

#[derive(Parser)]
#[command(name = "wai", version, about = "Polynomial first integrals of planar vector fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// Write the proximity graph in DOT format to this file.
    #[arg(long, global = true, value_name = "PATH")]
    dot: Option<PathBuf>,
    /// Seed for the genericity draws.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_DEPTH)]
    max_depth: usize,
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_TOWER_DEGREE)]
    max_tower_degree: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce the singularities of the foliation.
    Reduce { input: PathBuf },
    /// Dicritical configuration and its maximal points.
    Dicritical { input: PathBuf },
    /// Decide whether the field has a WAI first integral and compute it.
    Integrate {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// Degree of a WAI integral read off the dicritical configuration.
    Poincare {
        input: PathBuf,
        /// Maximise over placements of the line at infinity.
        #[arg(long)]
        bound: bool,
    },
    /// Base points of the pencil spanned by F1 and F2.
    PencilBasepoints { input: PathBuf },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Pairing,
    Darboux,
    Both,
}

enum Outcome {
    Done(Value, String),
    None(Value, String),
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn read_input(path: &PathBuf) -> Result<BTreeMap<String, String>, Failure> {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())?
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?
    };
    let mut out = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Failure(format!("line {}: expected key = value", n + 1)))?;
        let k = k.trim();
        if !["p", "q", "A", "B", "C", "F1", "F2"].contains(&k) {
            return Err(Failure(format!("line {}: unknown key {k:?}", n + 1)));
        }
        if out.insert(k.to_string(), v.trim().to_string()).is_some() {
            return Err(Failure(format!("line {}: duplicate key {k:?}", n + 1)));
        }
    }
    Ok(out)
}

fn get<'a>(m: &'a BTreeMap<String, String>, k: &str) -> Result<&'a str, Failure> {
    m.get(k).map(String::as_str).ok_or_else(|| Failure(format!("missing key {k}")))
}

fn field(m: &BTreeMap<String, String>) -> Result<AffineVectorField, Failure> {
    Ok(AffineVectorField::parse(get(m, "p")?, get(m, "q")?)?)
}

/// A form given directly by A, B, C or as the projectivization of (p, q).
fn form(m: &BTreeMap<String, String>) -> Result<ProjectiveOneForm, Failure> {
    if m.contains_key("A") {
        Ok(ProjectiveOneForm::parse(get(m, "A")?, get(m, "B")?, get(m, "C")?)?)
    } else {
        Ok(projectivize(&field(m)?))
    }
}

fn pencil_gen(m: &BTreeMap<String, String>, k: &str) -> Result<MultiPoly, Failure> {
    Ok(parse_poly_in(get(m, k)?, &PROJECTIVE_VARS)?)
}

fn write_dot(path: &Option<PathBuf>, dot: impl FnOnce() -> String) -> Result<(), Failure> {
    if let Some(p) = path {
        std::fs::write(p, dot()).map_err(|e| Failure(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

fn cmd_reduce(cli: &Cli, res: &ReductionResult) -> Result<Outcome, Failure> {
    let s = &res.singular_configuration;
    let dic: Vec<bool> = res.classification.iter().map(|c| *c == PointClass::Dicritical).collect();
    write_dot(&cli.dot, || s.to_dot(Some(&dic)))?;
    let mut text = format!("form: {}\n{} infinitely near singular points\n", res.omega, s.len());
    for p in s.points() {
        let _ = writeln!(text, "  {:<6} {:<12} {:<32} {}", p.label, res.classification[p.id].to_string(), p.location.to_string(), res.local_forms[p.id]);
    }
    let _ = writeln!(text, "dotted edges: {}", join(&s.dotted_edges().iter().map(|(a, b)| format!("{}-{}", s.point(*a).label, s.point(*b).label)).collect::<Vec<_>>()));
    Ok(Outcome::Done(res.to_json(), text))
}

fn cmd_dicritical(cli: &Cli, res: &ReductionResult) -> Result<Outcome, Failure> {
    let d = &res.dicritical_configuration;
    let flags: Vec<bool> = res.dicritical_classes().iter().map(|c| *c == PointClass::Dicritical).collect();
    write_dot(&cli.dot, || d.to_dot(Some(&flags)))?;
    let labels = |ids: &[usize]| ids.iter().map(|&i| d.point(i).label.clone()).collect::<Vec<_>>();
    let dicritical: Vec<usize> = (0..d.len()).filter(|&i| flags[i]).collect();
    let maximal = d.maximal_points();
    let infinity: Vec<usize> = res.dicritical_infinity_points().into_iter().collect();
    let text = format!(
        "D(X): {} points: {}\ndicritical: {}\nmaximal: {}\non the line at infinity: {}\n",
        d.len(),
        join(&labels(&(0..d.len()).collect::<Vec<_>>())),
        join(&labels(&dicritical)),
        join(&labels(&maximal)),
        join(&labels(&infinity)),
    );
    let doc = json!({
        "points": d.to_json(Some(&flags)),
        "dicritical": dicritical,
        "maximal": maximal,
        "infinity_points": infinity,
        "singular_ids": res.dicritical_in_singular,
    });
    Ok(Outcome::Done(doc, text))
}

fn certificate_text(c: &IntegralCertificate) -> String {
    let mut text = format!("first integral of degree {} ({:?} route)\n", c.degree, c.route);
    for f in &c.factors {
        let _ = writeln!(text, "  ({})^{}", f.poly, f.exponent);
        if let Some(conj) = &f.conjugates {
            let _ = writeln!(text, "    product of {} conjugates of {} over {}", conj.count, conj.representative, conj.field);
        }
    }
    if let Some(r) = &c.r {
        let _ = writeln!(text, "R = {r}");
    }
    let _ = writeln!(text, "K = {}", c.k);
    let _ = writeln!(text, "residual: {}", c.residual);
    text
}

fn halted(h: Halt) -> Result<Outcome, Failure> {
    match h {
        Halt::NoIntegral(n) => Ok(Outcome::None(
            json!({"degree": null, "factors": [], "R": null, "residual": null, "reason": n.reason.as_str(), "detail": n.detail}),
            format!("no WAI first integral: {} ({})\n", n.reason, n.detail),
        )),
        Halt::Error(e) => Err(Failure(e.to_string())),
    }
}

fn cmd_integrate(v: &AffineVectorField, res: ReductionResult, method: Method) -> Result<Outcome, Failure> {
    let cand = match candidates_from(res) {
        Ok(c) => c,
        Err(h) => return halted(h),
    };
    let run = |m: Method| match m {
        Method::Pairing => finish_pairing(v, &cand),
        _ => finish_darboux(v, &cand),
    };
    let result = match method {
        Method::Both => {
            let a = run(Method::Pairing);
            let b = run(Method::Darboux);
            match (&a, &b) {
                (Ok(x), Ok(y)) if x.factor_multiset() != y.factor_multiset() => {
                    return Err(Failure("pairing and Darboux routes return different integrals".into()))
                }
                (Ok(_), Err(h)) | (Err(h), Ok(_)) => return Err(Failure(format!("the two routes disagree: {h}"))),
                _ => {}
            }
            // The Darboux certificate is reported; it carries R from the pairing run.
            b.map(|mut c| {
                if let Ok(x) = &a {
                    c.r = x.r.clone();
                }
                c
            })
        }
        m => run(m),
    };
    match result {
        Ok(c) => Ok(Outcome::Done(c.to_json(), certificate_text(&c))),
        Err(h) => halted(h),
    }
}

fn cmd_poincare(res: &ReductionResult, bound: bool) -> Result<Outcome, Failure> {
    let d = &res.dicritical_configuration;
    if bound {
        let b = poincare_bound(d)?;
        let placement: Vec<usize> = b.placement.iter().copied().collect();
        let text = format!(
            "degree bound: {}\nattained with the line at infinity through {}\nplacements: {} tried, {} valid\n",
            b.bound,
            join(&placement.iter().map(|&i| d.point(i).label.clone()).collect::<Vec<_>>()),
            b.placements_tried,
            b.placements_valid
        );
        let doc = json!({"bound": b.bound, "placement": placement, "exponents": b.exponents, "placements_tried": b.placements_tried, "placements_valid": b.placements_valid});
        return Ok(Outcome::Done(doc, text));
    }
    match poincare_degree(d, &res.dicritical_infinity_points()) {
        Ok((n, exps)) => Ok(Outcome::Done(json!({"degree": n, "exponents": exps}), format!("degree: {n}\nexponents: {}\n", join(&exps)))),
        Err(h) => halted(h),
    }
}

fn cmd_pencil(cli: &Cli, m: &BTreeMap<String, String>) -> Result<Outcome, Failure> {
    let f1 = pencil_gen(m, "F1")?;
    let f2 = pencil_gen(m, "F2")?;
    let bp = pencil_base_points_with(&f1, &f2, cli.seed, cli.max_tower_degree)?;
    let conf = &bp.cluster.configuration;
    write_dot(&cli.dot, || conf.to_dot(Some(&bp.dicritical)))?;
    let mut text = format!("{} base points\n", conf.len());
    for p in conf.points() {
        let mark = if bp.dicritical[p.id] { " dicritical" } else { "" };
        let _ = writeln!(text, "  {:<6} m = {:<3} {}{mark}", p.label, bp.cluster.multiplicities[p.id], p.location);
    }
    let _ = writeln!(text, "generic member: {}", bp.generic_member);
    let doc = json!({
        "points": conf.to_json(Some(&bp.dicritical)),
        "multiplicities": bp.cluster.multiplicities,
        "dicritical": bp.dicritical,
        "generic_member": bp.generic_member.to_string(),
        "generic_coefficients": [bp.generic_coefficients.0, bp.generic_coefficients.1],
    });
    Ok(Outcome::Done(doc, text))
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let opts = ReduceOptions { max_depth: cli.max_depth, max_tower_degree: cli.max_tower_degree };
    match &cli.command {
        Command::Reduce { input } => cmd_reduce(cli, &reduce(&form(&read_input(input)?)?, opts)?),
        Command::Dicritical { input } => cmd_dicritical(cli, &reduce(&form(&read_input(input)?)?, opts)?),
        Command::Integrate { input, method } => {
            let v = field(&read_input(input)?)?;
            let res = reduce(&projectivize(&v), opts)?;
            cmd_integrate(&v, res, *method)
        }
        Command::Poincare { input, bound } => cmd_poincare(&reduce(&form(&read_input(input)?)?, opts)?, *bound),
        Command::PencilBasepoints { input } => cmd_pencil(cli, &read_input(input)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (doc, text, code) = match run(&cli) {
        Ok(Outcome::Done(d, t)) => (d, t, 0),
        Ok(Outcome::None(d, t)) => (d, t, 2),
        Err(Failure(msg)) => (json!({"error": msg}), format!("error: {msg}\n"), 1),
    };
    // A closed pipe on stdout is not an error of the analysis.
    let _ = if cli.json {
        writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&doc).unwrap())
    } else if code == 1 {
        write!(std::io::stderr(), "{text}")
    } else {
        write!(std::io::stdout(), "{text}")
    };
    ExitCode::from(code)
}
