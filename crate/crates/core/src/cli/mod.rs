//! Command-line front end: file and expression grammars plus dispatch.

pub mod complex_file;
pub mod knot_expr;

use std::cmp::Ordering;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

pub use complex_file::{parse_complex_file, serialize_complex, FileError};
pub use knot_expr::{parse_knot_expr, Atom, ExprError, KnotExpr, Term};

use crate::alexander::{cable_delta, lspace_phi, staircase, staircase_params, torus_delta, eval_recipe, LaurentPoly};
use crate::algebra::{dual, reduce, tensor, Complex};
use crate::homology::check_knot_like;
use crate::localequiv::{compare, standard_rep, RepResult};
use crate::standard::{
    build_standard, gc_lower, is_symmetric, n_of, p_of, parse_list, phi, shift, tau_of, uc_lower, Phi,
    ShiftMode, StandardParams,
};
use crate::Error;

#[derive(Parser, Debug)]
#[command(name = "knotlocal", version, about = "Local equivalence of knot-like complexes over F2[U,V]/(UV)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Source {
    /// Complex file.
    file: Option<PathBuf>,
    /// Knot recipe such as "Cable(D;3,4) - T(3,4)".
    #[arg(long, value_parser = parse_expr_arg, allow_hyphen_values = true)]
    expr: Option<KnotExpr>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate a complex file.
    Validate { file: PathBuf },
    /// Cancel all unit arrows.
    Reduce {
        file: PathBuf,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Tensor product of two complexes.
    Tensor {
        a: PathBuf,
        b: PathBuf,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Dual complex.
    Dual {
        file: PathBuf,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Write the standard complex with the given parameters.
    Std {
        #[arg(value_parser = parse_params_arg, allow_hyphen_values = true)]
        params: StandardParams,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Standard representative.
    Rep {
        #[command(flatten)]
        source: Source,
    },
    /// Representative together with the derived invariants.
    Inv {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        json: bool,
    },
    /// Compare two complexes: prints `<`, `~` or `>`.
    Cmp { a: PathBuf, b: PathBuf },
    /// Lengthen every arrow of length at least M by one.
    Shift {
        #[arg(value_parser = clap::value_parser!(u32).range(1..))]
        m: u32,
        #[arg(value_parser = parse_params_arg, allow_hyphen_values = true)]
        params: StandardParams,
        /// Only horizontal (U) arrows.
        #[arg(long = "u", conflicts_with = "v_only")]
        u_only: bool,
        /// Only vertical (V) arrows.
        #[arg(long = "v")]
        v_only: bool,
    },
    /// Alexander polynomials.
    #[command(subcommand)]
    Alex(AlexCommand),
    /// Staircase parameters of an L-space knot from its Alexander polynomial.
    Lspace {
        #[arg(value_parser = parse_poly_arg, allow_hyphen_values = true)]
        poly: LaurentPoly,
    },
}

#[derive(Subcommand, Debug)]
enum AlexCommand {
    /// Torus knot T(P,Q).
    Torus { p: i64, q: i64 },
    /// (P,Q) cable of a knot with Alexander polynomial POLY.
    Cable {
        p: i64,
        q: i64,
        #[arg(value_parser = parse_poly_arg, allow_hyphen_values = true)]
        poly: LaurentPoly,
    },
}

fn parse_params_arg(s: &str) -> Result<StandardParams, String> {
    let t = s.trim();
    let t = t
        .strip_prefix('(')
        .and_then(|x| x.strip_suffix(')'))
        .unwrap_or(t);
    StandardParams::new(parse_list(t).map_err(|e| e.to_string())?).map_err(|e| e.to_string())
}

fn parse_poly_arg(s: &str) -> Result<LaurentPoly, String> {
    s.parse().map_err(|e: crate::alexander::AlexanderError| e.to_string())
}

fn parse_expr_arg(s: &str) -> Result<KnotExpr, String> {
    parse_knot_expr(s).map_err(|e| e.to_string())
}

/// Invariants printed by `inv`, in output order.
#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct Invariants {
    pub rep: Vec<i64>,
    pub phi: Phi,
    pub tau: i64,
    #[serde(rename = "P")]
    pub p: i64,
    #[serde(rename = "N")]
    pub n: u32,
    pub gc_lower: f64,
    pub uc_lower: u32,
    pub symmetric: bool,
}

impl Invariants {
    pub fn of(params: &StandardParams) -> Self {
        let xs = params.as_slice();
        Invariants {
            rep: xs.to_vec(),
            phi: phi(xs),
            tau: tau_of(params),
            p: p_of(params),
            n: n_of(xs),
            gc_lower: gc_lower(xs),
            uc_lower: uc_lower(xs),
            symmetric: is_symmetric(xs),
        }
    }
}

fn show_params(p: &StandardParams) -> String {
    format!("({p})")
}

fn show_phi(phi: &Phi) -> String {
    let body: Vec<String> = phi.iter().map(|(j, v)| format!("{j}:{v}")).collect();
    format!("{{{}}}", body.join(", "))
}

fn read_complex(path: &Path) -> Result<Complex, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(path.display().to_string(), e))?;
    Ok(parse_complex_file(&text)?)
}

fn emit_complex(c: &Complex, dest: Option<&Path>, out: &mut dyn Write) -> Result<(), Error> {
    let text = serialize_complex(c);
    match dest {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(p.display().to_string(), e)),
        None => out.write_all(text.as_bytes()).map_err(|e| Error::Io("stdout".into(), e)),
    }
}

fn representative(source: &Source) -> Result<RepResult, Error> {
    match (&source.file, &source.expr) {
        (_, Some(e)) => Ok(eval_recipe(e)?),
        (Some(f), None) => Ok(standard_rep(&read_complex(f)?)?),
        (None, None) => unreachable!("clap enforces the group"),
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<(), Error> {
    let io = |e: std::io::Error| Error::Io("stdout".into(), e);
    match cmd {
        Command::Validate { file } => {
            let c = read_complex(&file)?;
            writeln!(out, "valid: {} generators, {} arrows", c.len(), c.arrow_count()).map_err(io)?;
            let report = check_knot_like(&reduce(&c), true);
            if report.is_knot_like {
                let s = report.applied_shift;
                writeln!(out, "knot-like: yes (grading shift {s})").map_err(io)?;
            } else {
                let why: Vec<String> = report.reasons.iter().map(|r| r.to_string()).collect();
                writeln!(out, "knot-like: no ({})", why.join("; ")).map_err(io)?;
            }
        }
        Command::Reduce { file, o } => emit_complex(&reduce(&read_complex(&file)?), o.as_deref(), out)?,
        Command::Tensor { a, b, o } => {
            let c = tensor(&read_complex(&a)?, &read_complex(&b)?);
            emit_complex(&c, o.as_deref(), out)?;
        }
        Command::Dual { file, o } => emit_complex(&dual(&read_complex(&file)?), o.as_deref(), out)?,
        Command::Std { params, o } => emit_complex(&build_standard(&params), o.as_deref(), out)?,
        Command::Rep { source } => {
            let r = representative(&source)?;
            writeln!(out, "{}", show_params(&r.params)).map_err(io)?;
        }
        Command::Inv { source, json } => {
            let inv = Invariants::of(&representative(&source)?.params);
            if json {
                let text = serde_json::to_string(&inv).expect("plain data serializes");
                writeln!(out, "{text}").map_err(io)?;
            } else {
                let rep = StandardParams::new(inv.rep.clone()).expect("representative");
                writeln!(out, "rep: {}", show_params(&rep)).map_err(io)?;
                writeln!(out, "phi: {}", show_phi(&inv.phi)).map_err(io)?;
                writeln!(out, "tau: {}", inv.tau).map_err(io)?;
                writeln!(out, "P: {}", inv.p).map_err(io)?;
                writeln!(out, "N: {}", inv.n).map_err(io)?;
                writeln!(out, "gc_lower: {}", inv.gc_lower).map_err(io)?;
                writeln!(out, "uc_lower: {}", inv.uc_lower).map_err(io)?;
                writeln!(out, "symmetric: {}", inv.symmetric).map_err(io)?;
            }
        }
        Command::Cmp { a, b } => {
            let sym = match compare(&read_complex(&a)?, &read_complex(&b)?)? {
                Ordering::Less => "<",
                Ordering::Equal => "~",
                Ordering::Greater => ">",
            };
            writeln!(out, "{sym}").map_err(io)?;
        }
        Command::Shift {
            m,
            params,
            u_only,
            v_only,
        } => {
            let mode = match (u_only, v_only) {
                (true, _) => ShiftMode::UOnly,
                (_, true) => ShiftMode::VOnly,
                _ => ShiftMode::Both,
            };
            writeln!(out, "{}", show_params(&shift(&params, m, mode))).map_err(io)?;
        }
        Command::Alex(AlexCommand::Torus { p, q }) => {
            writeln!(out, "{}", torus_delta(p, q)?).map_err(io)?;
        }
        Command::Alex(AlexCommand::Cable { p, q, poly }) => {
            writeln!(out, "{}", cable_delta(p, q, &poly)?).map_err(io)?;
        }
        Command::Lspace { poly } => {
            let st = staircase(&poly)?;
            let params = staircase_params(&poly)?;
            let gaps: Vec<String> = st.c.iter().map(i64::to_string).collect();
            writeln!(out, "c: [{}]", gaps.join(",")).map_err(io)?;
            writeln!(out, "rep: {}", show_params(&params)).map_err(io)?;
            writeln!(out, "phi: {}", show_phi(&lspace_phi(&poly)?)).map_err(io)?;
        }
    }
    Ok(())
}

/// Run the command line `args` (program name first). Returns the exit
/// status: 0 on success, 1 on domain errors, 2 on usage errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("knotlocal").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn inv_json_for_torus_knot() {
        let (code, out, _) = run_str(&["inv", "--expr", "T(3,4)", "--json"]);
        assert_eq!(code, 0);
        assert!(
            out.starts_with(r#"{"rep":[1,-2,2,-1],"phi":{"1":1,"2":1},"tau":3,"P":-6,"N":2,"#),
            "{out}"
        );
    }

    #[test]
    fn usage_and_domain_errors() {
        assert_eq!(run_str(&["frobnicate"]).0, 2);
        assert_eq!(run_str(&["std", "1,0"]).0, 2);
        assert_eq!(run_str(&["rep"]).0, 2);
        assert_eq!(run_str(&["alex", "torus", "4", "6"]).0, 1);
        assert_eq!(run_str(&["lspace", "t^2+t+1"]).0, 1);
        assert_eq!(run_str(&["validate", "/nonexistent/file.cfk"]).0, 1);
        assert_eq!(run_str(&["--help"]).0, 0);
    }

    #[test]
    fn small_commands() {
        assert_eq!(run_str(&["shift", "2", "1,-2,2,-1"]).1, "(1,-3,3,-1)\n");
        assert_eq!(run_str(&["shift", "2", "2,-2", "--u"]).1, "(3,-2)\n");
        assert_eq!(run_str(&["alex", "torus", "3", "4"]).1, "t^6-t^5+t^3-t+1\n");
        assert_eq!(
            run_str(&["alex", "cable", "2", "5", "t^2-t+1"]).1,
            "t^8-t^7+t^4-t+1\n"
        );
        let (_, out, _) = run_str(&["lspace", "t^8-t^7+t^4-t+1"]);
        assert_eq!(out, "c: [1,3]\nrep: (1,-3,3,-1)\nphi: {1:1, 3:1}\n");
        assert_eq!(run_str(&["rep", "--expr", "-Thin(2)"]).1, "(-1,1,-1,1)\n");
        assert_eq!(run_str(&["std", "()"]).1, "gen x0 0 0\n");
    }
}
