//! `metab`: command-line front end for the metabelian kernel and the
//! decomposition engine.
//!
//! Exit status: 0 on success, 1 on input or domain errors, 2 when a
//! certificate fails.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};

use metabelian::decomp::{
    decompose_b, decompose_chein, decompose_d, decompose_exponential, decompose_one_row, reduce_a, verify_word,
    Decomposition, HypothesisContext, Mode,
};
use metabelian::endo::{a_map, b_map, chein, chein_c, d_map, exponential, is_chein_valid};
use metabelian::magnus::lift_column;
use metabelian::parse::{parse_column, parse_endomorphism, parse_poly, parse_value, Value};
use metabelian::selftest::run_all;
use metabelian::serial::{element_to_json, endomorphism_from_str, endomorphism_to_json, word_from_str, word_to_json};
use metabelian::{Degrees, Endomorphism, Error, Field, MagnusElement, Poly, PolyMatrix};

#[derive(Parser, Debug)]
#[command(name = "metab", version, about = "Exact computation in free metabelian Lie algebras")]
struct Cli {
    /// Rank of the free metabelian Lie algebra.
    #[arg(long, global = true, default_value_t = 4, value_parser = clap::value_parser!(u16).range(2..=16))]
    n: u16,

    /// Coefficient field: `q` or `gf:<p>`.
    #[arg(long, global = true, default_value = "q", value_parser = parse_field)]
    field: Field,

    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,

    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Read inputs from a file; blocks are separated by lines `---`.
    #[arg(long, global = true)]
    file: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normal form of a polynomial, element or endomorphism.
    NormalForm {
        #[arg(allow_hyphen_values = true)]
        input: Vec<String>,
    },
    /// Fox derivatives of an element.
    Fox {
        #[arg(allow_hyphen_values = true)]
        input: Vec<String>,
    },
    /// The commutator element with a given Fox column.
    Lift {
        #[arg(allow_hyphen_values = true)]
        input: Vec<String>,
    },
    /// Jacobian matrix of an endomorphism.
    Jacobian {
        #[arg(allow_hyphen_values = true)]
        input: Vec<String>,
    },
    /// Whether an endomorphism is invertible.
    IsAut {
        #[arg(allow_hyphen_values = true)]
        input: Vec<String>,
    },
    /// Inverse of an automorphism.
    Invert {
        #[arg(allow_hyphen_values = true)]
        input: Vec<String>,
    },
    /// Product of endomorphisms, applied right to left.
    Compose {
        #[arg(allow_hyphen_values = true)]
        input: Vec<String>,
    },
    /// Whether an endomorphism is a one-row automorphism.
    IsChein {
        #[arg(allow_hyphen_values = true)]
        input: Vec<String>,
    },
    /// Lower and upper degree of an element or the nonlinear part of a map.
    Ldeg {
        #[arg(allow_hyphen_values = true)]
        input: Vec<String>,
    },
    /// Certified generator word for a map of a given family.
    Decompose {
        #[arg(long, value_enum, default_value_t = ModeArg::Tame)]
        mode: ModeArg,
        #[arg(long, value_enum)]
        family: Family,
        /// Moved generator for `one-row` and element input to `chein` (one-based).
        #[arg(long, default_value_t = 1)]
        row: usize,
        #[arg(allow_hyphen_values = true)]
        input: Vec<String>,
    },
    /// Check that a JSON word multiplies to a target endomorphism.
    VerifyWord {
        #[arg(allow_hyphen_values = true)]
        input: Vec<String>,
    },
    /// Run the built-in acceptance suite.
    Selftest,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Tame,
    AlmostTame,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    Chein,
    OneRow,
    D,
    Exp,
    A,
    B,
}

fn parse_field(s: &str) -> Result<Field, String> {
    Field::parse_spec(s).map_err(|e| e.to_string())
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure { code: if e.is_certification() { 2 } else { 1 }, kind: e.kind(), message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 1, kind: "usage", message: message.into() }
}

fn certificate_failure(message: impl Into<String>) -> Failure {
    Failure { code: 2, kind: "certification", message: message.into() }
}

type Outcome = Result<Output, Failure>;

/// Text and JSON renderings of one result; `code` is nonzero only for
/// results that are themselves failed certificates.
struct Output {
    text: String,
    json: Json,
    code: u8,
}

impl Output {
    fn ok(text: impl Into<String>, json: Json) -> Output {
        Output { text: text.into(), json, code: 0 }
    }
}

struct Session {
    n: usize,
    field: Field,
    seed: u64,
    file: Option<PathBuf>,
}

impl Session {
    /// Positional inputs, else file blocks, else stdin blocks.
    fn inputs(&self, positional: &[String]) -> Result<Vec<String>, Failure> {
        if !positional.is_empty() {
            if self.file.is_some() {
                return Err(usage("give inputs either as arguments or with --file, not both"));
            }
            return Ok(positional.to_vec());
        }
        let text = match &self.file {
            Some(path) => std::fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?,
            None => {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s).map_err(|e| usage(format!("cannot read stdin: {e}")))?;
                s
            }
        };
        let mut blocks = vec![String::new()];
        for line in text.lines() {
            if line.trim() == "---" {
                blocks.push(String::new());
            } else {
                let last = blocks.last_mut().expect("nonempty");
                last.push_str(line);
                last.push('\n');
            }
        }
        Ok(blocks.into_iter().filter(|b| !b.trim().is_empty()).collect())
    }

    fn exactly<const K: usize>(&self, positional: &[String], what: &str) -> Result<[String; K], Failure> {
        let v = self.inputs(positional)?;
        let got = v.len();
        v.try_into().map_err(|_| usage(format!("expected {K} input(s) ({what}), got {got}")))
    }

    fn endomorphism(&self, src: &str) -> Result<Endomorphism, Failure> {
        if src.trim_start().starts_with('{') {
            let phi = endomorphism_from_str(src)?;
            if phi.n() != self.n || phi.field() != self.field {
                return Err(usage(format!(
                    "JSON endomorphism is over n = {}, {} but the session is n = {}, {}",
                    phi.n(),
                    phi.field(),
                    self.n,
                    self.field
                )));
            }
            return Ok(phi);
        }
        Ok(parse_endomorphism(src, self.n, self.field)?)
    }

    fn element(&self, src: &str) -> Result<MagnusElement, Failure> {
        match parse_value(src, self.n, self.field)? {
            Value::Element(f) => Ok(f),
            Value::Poly(p) if p.is_zero() => Ok(MagnusElement::zero(self.n, self.field)),
            Value::Poly(_) => Err(usage("expected a Lie element, got a polynomial")),
        }
    }

    fn ctx(&self) -> Result<HypothesisContext, Failure> {
        Ok(HypothesisContext::new(self.n, self.field)?)
    }
}

fn is_endomorphism_text(src: &str) -> bool {
    src.contains("->") || src.trim_start().starts_with('{')
}

fn matrix_json(m: &PolyMatrix) -> Json {
    json!(m.rows().iter().map(|r| r.iter().map(Poly::to_string).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn degrees_json(d: Degrees) -> Json {
    json!({ "ldeg": d.ldeg(), "deg": d.deg() })
}

fn normal_form(s: &Session, input: &[String]) -> Outcome {
    let [src] = s.exactly::<1>(input, "a polynomial, element or endomorphism")?;
    if is_endomorphism_text(&src) {
        let phi = s.endomorphism(&src)?;
        return Ok(Output::ok(phi.to_string(), json!({ "kind": "endomorphism", "value": endomorphism_to_json(&phi) })));
    }
    Ok(match parse_value(&src, s.n, s.field)? {
        Value::Poly(p) => Output::ok(p.to_string(), json!({ "kind": "polynomial", "value": p.to_string() })),
        Value::Element(f) => {
            Output::ok(f.to_string(), json!({ "kind": "element", "text": f.to_string(), "value": element_to_json(&f) }))
        }
    })
}

fn fox(s: &Session, input: &[String]) -> Outcome {
    let [src] = s.exactly::<1>(input, "an element")?;
    let col = s.element(&src)?.fox_derivatives();
    let entries: Vec<String> = col.entries.iter().map(Poly::to_string).collect();
    Ok(Output::ok(col.to_string(), json!({ "column": entries })))
}

fn lift(s: &Session, input: &[String]) -> Outcome {
    let [src] = s.exactly::<1>(input, "a column")?;
    let f = lift_column(&parse_column(&src, s.n, s.field)?)?;
    Ok(Output::ok(f.to_string(), json!({ "text": f.to_string(), "value": element_to_json(&f) })))
}

fn jacobian(s: &Session, input: &[String]) -> Outcome {
    let [src] = s.exactly::<1>(input, "an endomorphism")?;
    let m = s.endomorphism(&src)?.jacobian();
    Ok(Output::ok(m.to_string().trim_end(), json!({ "matrix": matrix_json(&m) })))
}

fn is_aut(s: &Session, input: &[String]) -> Outcome {
    let [src] = s.exactly::<1>(input, "an endomorphism")?;
    let phi = s.endomorphism(&src)?;
    let det = phi.jacobian().determinant();
    let unit = det.is_constant() && !det.is_zero();
    Ok(Output::ok(unit.to_string(), json!({ "automorphism": unit, "determinant": det.to_string() })))
}

fn invert(s: &Session, input: &[String]) -> Outcome {
    let [src] = s.exactly::<1>(input, "an endomorphism")?;
    let inv = s.endomorphism(&src)?.invert()?;
    Ok(Output::ok(inv.to_string(), json!({ "value": endomorphism_to_json(&inv) })))
}

fn compose(s: &Session, input: &[String]) -> Outcome {
    let srcs = s.inputs(input)?;
    if srcs.len() < 2 {
        return Err(usage(format!("compose needs at least two endomorphisms, got {}", srcs.len())));
    }
    let mut acc = Endomorphism::identity(s.n, s.field);
    for src in &srcs {
        acc = acc.compose(&s.endomorphism(src)?)?;
    }
    Ok(Output::ok(acc.to_string(), json!({ "value": endomorphism_to_json(&acc) })))
}

fn is_chein(s: &Session, input: &[String]) -> Outcome {
    let [src] = s.exactly::<1>(input, "an endomorphism")?;
    let phi = s.endomorphism(&src)?;
    let row = phi.is_one_row().filter(|&i| {
        let f = phi.image(i) - &MagnusElement::generator(s.n, s.field, i);
        is_chein_valid(i, &f)
    });
    let text = match row {
        Some(i) => format!("true (row {})", i + 1),
        None => "false".to_string(),
    };
    Ok(Output::ok(text, json!({ "one_row": row.is_some(), "row": row.map(|i| i + 1) })))
}

fn ldeg(s: &Session, input: &[String]) -> Outcome {
    let [src] = s.exactly::<1>(input, "an element or endomorphism")?;
    let d = if is_endomorphism_text(&src) {
        s.endomorphism(&src)?.degrees()
    } else {
        match parse_value(&src, s.n, s.field)? {
            Value::Element(f) => f.degrees(),
            Value::Poly(p) => p.degrees(),
        }
    };
    Ok(Output::ok(d.to_string(), degrees_json(d)))
}

fn polys<const K: usize>(s: &Session, input: &[String], what: &str) -> Result<[Poly; K], Failure> {
    let srcs = s.exactly::<K>(input, what)?;
    let mut out = Vec::with_capacity(K);
    for src in &srcs {
        out.push(parse_poly(src, s.n, s.field)?);
    }
    Ok(out.try_into().unwrap_or_else(|_| unreachable!("length checked")))
}

fn decompose(s: &Session, mode: ModeArg, family: Family, row: usize, input: &[String]) -> Outcome {
    let mode = match mode {
        ModeArg::Tame => Mode::Tame,
        ModeArg::AlmostTame => Mode::AlmostTame,
    };
    let ctx = s.ctx()?;
    if row == 0 || row > s.n {
        return Err(Error::IndexOutOfRange { index: row, n: s.n }.into());
    }
    let i = row - 1;
    let (d, target): (Decomposition, Endomorphism) = match family {
        Family::Chein => {
            let [src] = s.exactly::<1>(input, "a polynomial a or one-row data f")?;
            match parse_value(&src, s.n, s.field)? {
                Value::Poly(a) => (decompose_chein(&a, mode, ctx)?, chein_c(&a)?),
                Value::Element(f) => (decompose_one_row(i, &f, mode, ctx)?, chein(i, &f)?),
            }
        }
        Family::OneRow => {
            let [src] = s.exactly::<1>(input, "one-row data f")?;
            let f = s.element(&src)?;
            (decompose_one_row(i, &f, mode, ctx)?, chein(i, &f)?)
        }
        Family::D => {
            let [a] = polys::<1>(s, input, "a")?;
            (decompose_d(&a, mode, ctx)?, d_map(&a)?)
        }
        Family::Exp => {
            let [src] = s.exactly::<1>(input, "a commutator element m")?;
            let m = s.element(&src)?;
            (decompose_exponential(&m, mode, ctx)?, exponential(&m)?)
        }
        Family::A => {
            almost_tame_only(mode, "a")?;
            let [h, g] = polys::<2>(s, input, "h and g")?;
            (reduce_a(&h, &g, ctx)?, a_map(&h, &g)?)
        }
        Family::B => {
            almost_tame_only(mode, "b")?;
            let [h, f, g] = polys::<3>(s, input, "h, f and g")?;
            (decompose_b(&h, &f, &g, ctx)?, b_map(&h, &f, &g)?)
        }
    };
    if !verify_word(&d.word, &target) {
        return Err(certificate_failure("the word does not multiply to the target map"));
    }
    let text = format!(
        "{}\nlength: {}\ndepth: {}\nalphabet: {}\ncertificate: verified",
        d.word,
        d.word.len(),
        d.depth,
        d.word.alphabet()
    );
    let json = json!({
        "word": word_to_json(&d.word),
        "length": d.word.len(),
        "depth": d.depth,
        "certified": true,
    });
    Ok(Output::ok(text, json))
}

fn almost_tame_only(mode: Mode, family: &str) -> Result<(), Failure> {
    if mode == Mode::Tame {
        return Err(Error::Hypothesis(format!("family {family} is decomposed in almost-tame mode only")).into());
    }
    Ok(())
}

fn verify(s: &Session, input: &[String]) -> Outcome {
    let [word_src, target_src] = s.exactly::<2>(input, "a JSON word and a target endomorphism")?;
    let word = word_from_str(&word_src)?;
    let target = if target_src.trim_start().starts_with('{') {
        endomorphism_from_str(&target_src)?
    } else {
        parse_endomorphism(&target_src, word.n(), word.field())?
    };
    let ok = verify_word(&word, &target);
    let out = Output {
        text: if ok { "verified".into() } else { "not verified".into() },
        json: json!({ "verified": ok, "length": word.len() }),
        code: if ok { 0 } else { 2 },
    };
    Ok(out)
}

fn selftest(s: &Session) -> Outcome {
    let reports = run_all(s.seed);
    let all = reports.iter().all(|r| r.passed());
    let mut text = String::new();
    for r in &reports {
        let verdict = if r.passed() { "PASS" } else { "FAIL" };
        text.push_str(&format!("criterion {:>2}  {verdict}  {} ({} checks)\n", r.id, r.title, r.checks));
        for f in &r.failures {
            text.push_str(&format!("    {f}\n"));
        }
    }
    text.push_str(if all { "all criteria pass" } else { "some criteria fail" });
    let json = json!({
        "seed": s.seed,
        "passed": all,
        "criteria": reports.iter().map(|r| json!({
            "id": r.id,
            "title": r.title,
            "checks": r.checks,
            "passed": r.passed(),
            "failures": r.failures,
        })).collect::<Vec<_>>(),
    });
    Ok(Output { text, json, code: if all { 0 } else { 2 } })
}

fn dispatch(cli: &Cli) -> Outcome {
    let s = Session { n: usize::from(cli.n), field: cli.field, seed: cli.seed, file: cli.file.clone() };
    match &cli.command {
        Command::NormalForm { input } => normal_form(&s, input),
        Command::Fox { input } => fox(&s, input),
        Command::Lift { input } => lift(&s, input),
        Command::Jacobian { input } => jacobian(&s, input),
        Command::IsAut { input } => is_aut(&s, input),
        Command::Invert { input } => invert(&s, input),
        Command::Compose { input } => compose(&s, input),
        Command::IsChein { input } => is_chein(&s, input),
        Command::Ldeg { input } => ldeg(&s, input),
        Command::Decompose { mode, family, row, input } => decompose(&s, *mode, *family, *row, input),
        Command::VerifyWord { input } => verify(&s, input),
        Command::Selftest => selftest(&s),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("plain data serializes"));
            } else {
                println!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            if cli.json {
                let doc = json!({ "error": { "kind": f.kind, "message": f.message } });
                eprintln!("{}", serde_json::to_string_pretty(&doc).expect("plain data serializes"));
            } else {
                eprintln!("error ({}): {}", f.kind, f.message);
            }
            ExitCode::from(f.code)
        }
    }
}
