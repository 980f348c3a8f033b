use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use nsa_core::folcheck::{check_transfer, parse_formula, parse_model, FiniteModel, FolError};
use nsa_core::folcheck::model::tuples;
use nsa_core::hyper::{decide2, is_unlimited, nunustar_check, nunustar_direct, Hyper1, Hyper2};
use nsa_core::lr::{
    alpha_gamma_roundtrip_check, exactness_step_check, extend_ultrafilter_step, lr_from_sexp,
    parse_lr, parse_uf, CylUF, Exactness, LocalRelator, LrError,
};
use nsa_core::regress::{self, DEFAULT_SEED};
use nsa_core::folcheck::TransferSuiteConfig;
use nsa_core::seq::{Expr, Var};
use nsa_core::sexpr::{parse_all, SyntaxError};

use crate::dsl::{parse_expr, parse_pred, parse_term_dsl, Parsed};
use crate::report::Report;

#[derive(Debug, Parser)]
#[command(name = "nsa", version, about = "Decision procedures and harnesses for definable hyperreals")]
pub struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normalize a term or decide a predicate, and print sample values.
    Eval {
        text: String,
        /// Inner indices at which to print values of a one-index term.
        #[arg(long, value_delimiter = ',', default_values_t = [0u64, 1, 2, 3, 4])]
        at: Vec<u64>,
    },
    /// Decide a predicate in one or two indices.
    Compare { pred: String },
    /// Run the battery of facts about the two embeddings into the iterated power.
    Level2,
    /// Decide `R(*ν(b), ν(a))`; without arguments run the agreement battery.
    Nunustar {
        /// A predicate in `x` and `y`, followed by the terms `a` and `b`.
        #[arg(num_args = 0..=3)]
        args: Vec<String>,
    },
    /// Check transfer of a sentence; without a file run the full battery.
    Transfer {
        formula: Option<PathBuf>,
        /// Model file; by default every model of one binary relation `R` on a
        /// sort `A` with at most two elements.
        #[arg(long)]
        model: Option<PathBuf>,
        /// Largest index set.
        #[arg(long, default_value_t = 2)]
        s: usize,
    },
    /// Check the functor laws of finite ultrapowers.
    FunctorLaws {
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        s: usize,
    },
    /// Round-trip a relator file; without a file run random relators.
    LrRun {
        file: Option<PathBuf>,
        /// Size of the target set `X`.
        #[arg(long, default_value_t = 2)]
        nx: usize,
        #[arg(long, default_value_t = 24)]
        tables: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Extend a relator by one index, from a file or on random requests.
    Extend {
        #[arg(required_unless_present = "random", conflicts_with = "random")]
        file: Option<PathBuf>,
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Ultrafilters on finite sets and the GF(2) span check.
    Stone,
    /// Run every battery.
    Regress {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Syntax(#[from] SyntaxError),
    #[error("{path}: {err}")]
    FileSyntax { path: String, err: SyntaxError },
    #[error("{0}")]
    Input(String),
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn in_file(path: &Path) -> impl Fn(SyntaxError) -> CliError + '_ {
    move |err| CliError::FileSyntax {
        path: path.display().to_string(),
        err,
    }
}

fn fol_error(path: &Path, e: FolError) -> CliError {
    match e {
        FolError::Syntax(s) => in_file(path)(s),
        other => CliError::Input(format!("{}: {other}", path.display())),
    }
}

fn lr_error(path: &Path, e: LrError) -> CliError {
    match e {
        LrError::Syntax(s) => in_file(path)(s),
        other => CliError::Input(format!("{}: {other}", path.display())),
    }
}

fn input<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

pub fn run(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Eval { text, at } => eval(text, at),
        Command::Compare { pred } => compare(pred),
        Command::Level2 => Ok(Report::from_checks("level2", &[regress::level2_facts()])),
        Command::Nunustar { args } => nunustar(args),
        Command::Transfer { formula, model, s } => transfer(formula.as_deref(), model.as_deref(), *s),
        Command::FunctorLaws { k, s } => Ok(Report::from_checks("functor-laws", &[regress::functor_laws(*s, *k)])),
        Command::LrRun { file, nx, tables, seed } => match file {
            Some(f) => lr_run(f, *nx),
            None => Ok(Report::from_checks("lr-run", &[regress::lr_roundtrip(*tables, *seed)])),
        },
        Command::Extend { file, random, seed } => match (file, random) {
            (Some(f), _) => extend(f),
            (None, Some(n)) => Ok(Report::from_checks("extend", &[regress::extension(*n, *seed)])),
            (None, None) => Err(CliError::Input("extend needs a file or --random N".into())),
        },
        Command::Stone => Ok(Report::from_checks("stone", &[regress::stone()])),
        Command::Regress { seed } => Ok(Report::from_checks("regress", &regress::run_all(*seed))),
    }
}

fn eval(text: &str, at: &[u64]) -> Result<Report, CliError> {
    let mut r = Report::new("eval");
    r.instances = 1;
    match parse_term_dsl(text)? {
        Parsed::Pred(p) => {
            r.details.push(format!("predicate: {p}"));
            r.details.push(format!("verdict: {}", decide2(&p)));
        }
        Parsed::Term(e) => {
            let h2 = Hyper2::from_expr(e.clone()).map_err(input)?;
            r.details.push(format!("term: {e}"));
            r.details.push(format!("normal form: {}", h2.normal()));
            r.details.push(format!("sort: {}", h2.base()));
            if !e.mentions(Var::Outer) {
                let h = Hyper1::from_expr(e.clone()).map_err(input)?;
                if let Some(v) = h.standard_value() {
                    r.details.push(format!("standard value: {v}"));
                }
                if h.base().is_integral() {
                    r.details.push(format!("unlimited: {}", is_unlimited(&h)));
                }
                for &n in at {
                    let v = e.eval_at(n).map_or_else(|err| err.to_string(), |q| q.to_string());
                    r.details.push(format!("n = {n}: {v}"));
                }
            }
        }
    }
    Ok(r)
}

fn compare(text: &str) -> Result<Report, CliError> {
    let p = parse_pred(text)?;
    let mut r = Report::new("compare");
    r.instances = 1;
    r.details.push(decide2(&p).to_string());
    Ok(r)
}

fn level1(text: &str) -> Result<Hyper1, CliError> {
    let e: Expr = parse_expr(text)?;
    Hyper1::from_expr(e).map_err(input)
}

fn nunustar(args: &[String]) -> Result<Report, CliError> {
    let [rel, a, b] = args else {
        if args.is_empty() {
            return Ok(Report::from_checks("nunustar", &[regress::nunustar_agreement()]));
        }
        return Err(CliError::Input("expected a relation in x and y and two terms".into()));
    };
    let rel = parse_pred(rel)?;
    let (a, b) = (level1(a)?, level1(b)?);
    let via_d = nunustar_check(&rel, &a, &b).map_err(input)?;
    let direct = nunustar_direct(&rel, &a, &b);
    let mut r = Report::new("nunustar");
    r.details.push(via_d.to_string());
    r.details.push(format!("direct iterated verdict: {direct}"));
    r.check(!(via_d.is_decided() && direct.is_decided()) || via_d == direct, || {
        format!("membership in *D gives {via_d}, the direct verdict is {direct}")
    });
    Ok(r)
}

/// Every model of one binary relation `R` on a sort `A` with `|A| ≤ 2`.
fn small_models() -> Result<Vec<(String, FiniteModel)>, CliError> {
    let mut out = Vec::new();
    for a in 0..=2usize {
        let pairs = tuples(&[a, a]);
        for rel in 0..1u32 << (a * a) {
            let chosen: Vec<Vec<usize>> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| rel >> i & 1 == 1)
                .map(|(_, t)| t.clone())
                .collect();
            let mut m = FiniteModel::new();
            m.add_sized_carrier("A", a).map_err(input)?;
            m.add_relation("R", &["A", "A"], chosen.clone()).map_err(input)?;
            out.push((format!("|A|={a} R={chosen:?}"), m));
        }
    }
    Ok(out)
}

fn transfer(formula: Option<&Path>, model: Option<&Path>, s: usize) -> Result<Report, CliError> {
    let Some(path) = formula else {
        let cfg = TransferSuiteConfig::default();
        return Ok(Report::from_checks("transfer", &[regress::transfer(&cfg)]));
    };
    if s == 0 {
        return Err(CliError::Input("--s must be at least 1".into()));
    }
    let phi = parse_formula(&read(path)?).map_err(in_file(path))?;
    if !phi.is_sentence() {
        return Err(CliError::Input(format!("{}: {phi} has free variables", path.display())));
    }
    let models = match model {
        Some(mp) => vec![(
            mp.display().to_string(),
            parse_model(&read(mp)?).map_err(|e| fol_error(mp, e))?,
        )],
        None => small_models()?,
    };
    let mut r = Report::new("transfer");
    r.details.push(format!("sentence: {phi}"));
    r.details.push(format!("{} models, index sets of size 1 to {s}", models.len()));
    for (name, m) in &models {
        for size in 1..=s {
            for s0 in 0..size {
                let t = check_transfer(m, size, s0, &phi).map_err(input)?;
                r.check(t.agrees(), || {
                    format!("{name}, |S|={size}, point {s0}: {} in the model, {} in the power", t.standard, t.star)
                });
            }
        }
    }
    Ok(r)
}

fn lr_run(path: &Path, nx: usize) -> Result<Report, CliError> {
    let lr = parse_lr(&read(path)?).map_err(|e| lr_error(path, e))?;
    let rt = alpha_gamma_roundtrip_check(&lr, nx).map_err(|e| lr_error(path, e))?;
    let mut r = Report::new("lr-run");
    r.details.push(format!(
        "|B| = {}, |E| = {}, separated: {}",
        lr.nb(),
        lr.ne(),
        lr.is_separated().map_err(input)?
    ));
    r.details.push(describe_uf(&lr).map_err(input)?);
    r.details.push(format!("classes of *X with |X| = {nx}: {}", rt.star_classes));
    r.details.push(format!(
        "induced index set: {} classes of *B, {} classes of *X",
        rt.induced_index, rt.induced_classes
    ));
    r.check(rt.induced_uf_valid, || "the induced ultrafilter is not principal at its atom".into());
    r.check(rt.gamma_well_defined, || "gamma depends on the chosen representative".into());
    r.check(rt.alpha_gamma_identity, || "alpha after gamma is not the identity".into());
    r.check(rt.gamma_alpha_identity, || "gamma after alpha is not the identity".into());
    if let Some(p) = rt.projections_fixed {
        r.check(p, || "gamma moves a projection".into());
    }
    Ok(r)
}

fn describe_uf(lr: &LocalRelator) -> Result<String, LrError> {
    let point = |coords: &[usize], values: &[usize]| {
        coords
            .iter()
            .zip(values)
            .map(|(&e, &b)| format!("{}={}", lr.index()[e], lr.base()[b]))
            .collect::<Vec<_>>()
            .join(" ")
    };
    Ok(match lr.uf() {
        CylUF::PrincipalAt(p) => format!("principal at {}", point(&(0..p.len()).collect::<Vec<_>>(), p)),
        CylUF::TableBacked { nb, universe, .. } => {
            format!("table with atom {}", point(universe, &lr.uf().atom(*nb, universe)?))
        }
    })
}

fn extend(path: &Path) -> Result<Report, CliError> {
    let text = read(path)?;
    let forms = parse_all(&text).map_err(in_file(path))?;
    let shape = |pos: usize| in_file(path)(SyntaxError::new(pos, "expected (lr …) followed by (extend (eta …) ultrafilter)"));
    let [lr_form, req] = &forms[..] else {
        return Err(shape(forms.get(2).map_or(0, |f| f.pos())));
    };
    let lr = lr_from_sexp(lr_form).map_err(|e| lr_error(path, e))?;
    let Some(("extend", [eta, uf])) = req.as_call() else {
        return Err(shape(req.pos()));
    };
    let Some(("eta", names)) = eta.as_call() else {
        return Err(shape(eta.pos()));
    };
    let eta: Vec<usize> = names
        .iter()
        .map(|s| {
            let a = s.expect_atom("an index")?;
            lr.index()
                .iter()
                .position(|x| x == a)
                .ok_or_else(|| SyntaxError::new(s.pos(), format!("unknown index {a}")))
        })
        .collect::<Result<_, _>>()
        .map_err(in_file(path))?;
    // Coordinates of U are i0 … ik, the last one being the new index.
    let inames: Vec<String> = (0..=eta.len()).map(|i| format!("i{i}")).collect();
    let u = parse_uf(uf, lr.base(), &inames).map_err(|e| lr_error(path, e))?;

    let mut r = Report::new("extend");
    match exactness_step_check(&lr, &eta, &u) {
        Ok(Exactness::Found(e)) => r.details.push(format!("already realized by {}", lr.index()[e])),
        Ok(Exactness::NotExact) => r.details.push("not realized inside the index set".into()),
        Err(LrError::IncompatibleUltrafilters) => {
            r.check(false, || LrError::IncompatibleUltrafilters.to_string());
            return Ok(r);
        }
        Err(e) => return Err(lr_error(path, e)),
    }
    let x = extend_ultrafilter_step(&lr, &eta, &u).map_err(|e| lr_error(path, e))?;
    r.details.push(format!("new index {}", x.lr.index()[x.e_new]));
    r.details.push(describe_uf(&x.lr).map_err(input)?);
    r.check(x.projection_ok, || "the extension does not restrict to the given ultrafilter".into());
    r.check(x.pullback_ok, || "the extension does not pull back to the requested ultrafilter".into());
    Ok(r)
}
