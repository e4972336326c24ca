//! Command-line interface: curve roots, Landen chains, periods, the Abel
//! map, function evaluation, and the rectangle-to-channel conformal map.
//!
//! Complex flags use the shell-safe form `a+bi` / `a-bi` with decimal or
//! scientific components. Text output carries 17 significant digits; with
//! `--json` every complex value becomes a `{re, im}` record holding full
//! binary64 round-trip representations.
//!
//! Exit codes: 0 ok, 2 argument or file parse error, 3 non-finite input,
//! 4 no convergence, 5 domain error (pole, singularity, off-curve,
//! degenerate curve).

use std::collections::HashMap;
use std::fmt::Write;
use std::process::ExitCode;

use serde::{Deserialize, Serialize};
use serde_json::json;
use weierstrass::{
    abel_map, chain_invariant_deltas, classify, curve_from_gamma, discriminant, eval_q,
    invariants_from_roots, iterate_optimal, order_properly, quasi_periods, reduced_basis,
    solve_cubic, trace_q, weierstrass_at, weierstrass_at_no_sigma, Complex64, ConformalParams,
    CurvePoint, Error, Invariants, SubgroupRank, Tolerances,
};

const USAGE: &str = "\
usage: weierstrass <command> [flags]

commands:
  roots   --g2 <c> --g3 <c> [--json]
          properly ordered roots of 4x^3 - g2 x - g3 and the discriminant
  chain   --g2 <c> --g3 <c> [--json]
          per-step invariants g2, g3 and discriminant of the Landen chain
  periods --g2 <c> --g3 <c> [--json]
          reduced basis omega1, omega2 and quasi-periods eta1, eta2
  abel    --g2 <c> --g3 <c> --x <c> --y <c> [--json]
          elliptic integral z with (x, y) = (p(z), p'(z)), defined mod the lattice
  eval    --g2 <c> --g3 <c> --z <c> [--functions p,dp,zeta,sigma] [--json]
          Weierstrass function values at z
  qmap    --params <file> [--gamma <r>] (--z <c> | --trace <file>) [--json]
          conformal channel map Q(z); --trace follows a path with branch
          unwrapping

complex flags are written a+bi, e.g. --g2 3+1i --g3 2+0i";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    ExitCode::from(run(&args) as u8)
}

fn run(args: &[String]) -> i32 {
    let Some(command) = args.first() else {
        eprintln!("{USAGE}");
        return 2;
    };
    if command == "--help" || command == "-h" || command == "help" {
        println!("{USAGE}");
        return 0;
    }
    let flags = match parse_flags(&args[1..]) {
        Ok(f) => f,
        Err(msg) => {
            eprintln!("error: {msg}");
            return 2;
        }
    };
    let mut out = String::new();
    let result = match command.as_str() {
        "roots" => cmd_roots(&flags, &mut out),
        "chain" => cmd_chain(&flags, &mut out),
        "periods" => cmd_periods(&flags, &mut out),
        "abel" => cmd_abel(&flags, &mut out),
        "eval" => cmd_eval(&flags, &mut out),
        "qmap" => cmd_qmap(&flags, &mut out),
        other => {
            eprintln!("error: unknown command `{other}`\n{USAGE}");
            return 2;
        }
    };
    match result {
        Ok(()) => {
            emit(&out);
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    }
}

/// Writes to stdout, swallowing broken pipes from downstream consumers.
fn emit(s: &str) {
    use std::io::Write;
    let stdout = std::io::stdout();
    let _ = stdout.lock().write_all(s.as_bytes());
}

struct Flags {
    values: HashMap<String, String>,
    json: bool,
}

struct CliError {
    code: i32,
    message: String,
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NonFinite => 3,
            Error::NoConvergence => 4,
            _ => 5,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

fn usage_err(msg: impl Into<String>) -> CliError {
    CliError {
        code: 2,
        message: msg.into(),
    }
}

type CmdResult = Result<(), CliError>;

fn parse_flags(args: &[String]) -> Result<Flags, String> {
    let mut values = HashMap::new();
    let mut json = false;
    let mut k = 0;
    while k < args.len() {
        let a = &args[k];
        if a == "--json" {
            json = true;
            k += 1;
            continue;
        }
        let Some(name) = a.strip_prefix("--") else {
            return Err(format!("unexpected argument `{a}`"));
        };
        let Some(value) = args.get(k + 1) else {
            return Err(format!("flag --{name} needs a value"));
        };
        values.insert(name.to_string(), value.clone());
        k += 2;
    }
    Ok(Flags { values, json })
}

impl Flags {
    fn complex(&self, name: &str) -> Result<Complex64, CliError> {
        let raw = self
            .values
            .get(name)
            .ok_or_else(|| usage_err(format!("missing --{name}")))?;
        parse_complex(raw).ok_or_else(|| usage_err(format!("cannot parse --{name} `{raw}`")))
    }

    fn real(&self, name: &str) -> Result<f64, CliError> {
        let raw = self
            .values
            .get(name)
            .ok_or_else(|| usage_err(format!("missing --{name}")))?;
        raw.parse()
            .map_err(|_| usage_err(format!("cannot parse --{name} `{raw}`")))
    }

    fn invariants(&self) -> Result<Invariants, CliError> {
        Ok(Invariants::new(self.complex("g2")?, self.complex("g3")?))
    }
}

/// `a`, `a+bi`, `a-bi`, or `bi`, with decimal or scientific components.
fn parse_complex(s: &str) -> Option<Complex64> {
    let s = s.trim();
    let Some(body) = s.strip_suffix(['i', 'I']) else {
        return s.parse().ok().map(|re| Complex64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let mut split = None;
    for k in (1..bytes.len()).rev() {
        if matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
            split = Some(k);
            break;
        }
    }
    match split {
        Some(k) => {
            let re: f64 = body[..k].parse().ok()?;
            let im: f64 = body[k..].parse().ok()?;
            Some(Complex64::new(re, im))
        }
        None => body.parse().ok().map(|im| Complex64::new(0.0, im)),
    }
}

fn fmt_c(z: Complex64) -> String {
    format!("{:.16e}{:+.16e}i", z.re, z.im)
}

fn crec(z: Complex64) -> serde_json::Value {
    json!({"re": z.re, "im": z.im})
}

fn cmd_roots(flags: &Flags, out: &mut String) -> CmdResult {
    let inv = flags.invariants()?;
    let roots = order_properly(solve_cubic(inv)?);
    let delta = discriminant(inv)?;
    if flags.json {
        let obj = json!({
            "e1": crec(roots.e1),
            "e2": crec(roots.e2),
            "e3": crec(roots.e3),
            "delta": crec(delta),
            "abs_delta": delta.norm(),
        });
        let _ = writeln!(out, "{obj}");
    } else {
        let _ = writeln!(out, "e1 = {}", fmt_c(roots.e1));
        let _ = writeln!(out, "e2 = {}", fmt_c(roots.e2));
        let _ = writeln!(out, "e3 = {}", fmt_c(roots.e3));
        let _ = writeln!(out, "delta = {}", fmt_c(delta));
        let _ = writeln!(out, "|delta| = {:.16e}", delta.norm());
    }
    Ok(())
}

fn cmd_chain(flags: &Flags, out: &mut String) -> CmdResult {
    let inv = flags.invariants()?;
    let tol = Tolerances::default();
    let delta0 = discriminant(inv)?;
    let mut rows = vec![(0usize, inv, delta0)];
    let mut notice = None;
    match classify(inv, &tol)? {
        SubgroupRank::Rank0 => notice = Some("rank-0 subgroup (g2 = g3 = 0); no Landen chain"),
        SubgroupRank::Rank1 => {
            notice = Some("rank-1 subgroup (vanishing discriminant); no Landen chain")
        }
        SubgroupRank::Rank2 => {
            let t = order_properly(solve_cubic(inv)?);
            let chain = iterate_optimal(t, &tol)?;
            for (n, (inv_n, delta_n)) in chain_invariant_deltas(&chain).into_iter().enumerate() {
                rows.push((n + 1, inv_n, delta_n));
            }
        }
    }
    if flags.json {
        let obj: Vec<_> = rows
            .iter()
            .map(|(n, i, d)| json!({"n": n, "g2": crec(i.g2), "g3": crec(i.g3), "delta": crec(*d)}))
            .collect();
        let _ = writeln!(out, "{}", serde_json::Value::Array(obj));
    } else {
        if let Some(msg) = notice {
            let _ = writeln!(out, "{msg}");
        }
        for (n, i, d) in &rows {
            let _ = writeln!(out, "n = {n}");
            let _ = writeln!(out, "  g2    = {}", fmt_c(i.g2));
            let _ = writeln!(out, "  g3    = {}", fmt_c(i.g3));
            let _ = writeln!(out, "  delta = {}", fmt_c(*d));
        }
    }
    Ok(())
}

fn cmd_periods(flags: &Flags, out: &mut String) -> CmdResult {
    let inv = flags.invariants()?;
    let tol = Tolerances::default();
    let basis = reduced_basis(inv, &tol)?;
    let quasi = quasi_periods(&basis, inv, &tol)?;
    let legendre = quasi.eta1 * basis.omega2
        - quasi.eta2 * basis.omega1
        - Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    if flags.json {
        let obj = json!({
            "omega1": crec(basis.omega1),
            "omega2": crec(basis.omega2),
            "eta1": crec(quasi.eta1),
            "eta2": crec(quasi.eta2),
            "legendre_residual": legendre.norm(),
        });
        let _ = writeln!(out, "{obj}");
    } else {
        let _ = writeln!(out, "omega1 = {}", fmt_c(basis.omega1));
        let _ = writeln!(out, "omega2 = {}", fmt_c(basis.omega2));
        let _ = writeln!(out, "eta1   = {}", fmt_c(quasi.eta1));
        let _ = writeln!(out, "eta2   = {}", fmt_c(quasi.eta2));
        let _ = writeln!(out, "legendre residual = {:.16e}", legendre.norm());
    }
    Ok(())
}

fn cmd_abel(flags: &Flags, out: &mut String) -> CmdResult {
    let inv = flags.invariants()?;
    let pt = CurvePoint::new(flags.complex("x")?, flags.complex("y")?);
    let z = abel_map(inv, pt, &Tolerances::default())?;
    if flags.json {
        let _ = writeln!(out, "{}", json!({"z": crec(z)}));
    } else {
        let _ = writeln!(out, "z = {}", fmt_c(z));
    }
    Ok(())
}

fn cmd_eval(flags: &Flags, out: &mut String) -> CmdResult {
    let inv = flags.invariants()?;
    let z = flags.complex("z")?;
    let selection = match flags.values.get("functions") {
        None => vec!["p", "dp", "zeta", "sigma"],
        Some(raw) => {
            let parts: Vec<&str> = raw.split(',').map(str::trim).collect();
            for p in &parts {
                if !matches!(*p, "p" | "dp" | "zeta" | "sigma") {
                    return Err(usage_err(format!("unknown function `{p}`")));
                }
            }
            parts
        }
    };
    let tol = Tolerances::default();
    let vals = if selection.contains(&"sigma") {
        weierstrass_at(inv, z, &tol)?
    } else {
        weierstrass_at_no_sigma(inv, z, &tol)?
    };
    let named = [
        ("p", vals.p),
        ("dp", vals.dp),
        ("zeta", vals.zeta),
        ("sigma", vals.sigma),
    ];
    if flags.json {
        let mut obj = serde_json::Map::new();
        for (name, v) in named {
            if selection.contains(&name) {
                obj.insert(name.to_string(), crec(v));
            }
        }
        let _ = writeln!(out, "{}", serde_json::Value::Object(obj));
    } else {
        for (name, v) in named {
            if selection.contains(&name) {
                let _ = writeln!(out, "{name:5} = {}", fmt_c(v));
            }
        }
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct ComplexRecord {
    re: f64,
    im: f64,
}

impl From<ComplexRecord> for Complex64 {
    fn from(r: ComplexRecord) -> Self {
        Complex64::new(r.re, r.im)
    }
}

#[derive(Deserialize)]
struct ParamsFile {
    #[serde(rename = "D")]
    d: ComplexRecord,
    zplus: ComplexRecord,
    zminus: ComplexRecord,
    hplus: f64,
    hminus: f64,
    g2: ComplexRecord,
    g3: ComplexRecord,
}

fn cmd_qmap(flags: &Flags, out: &mut String) -> CmdResult {
    let path = flags
        .values
        .get("params")
        .ok_or_else(|| usage_err("missing --params <file>"))?;
    let raw =
        std::fs::read_to_string(path).map_err(|e| usage_err(format!("cannot read {path}: {e}")))?;
    let file: ParamsFile =
        serde_json::from_str(&raw).map_err(|e| usage_err(format!("bad params file: {e}")))?;
    let inv = match flags.values.get("gamma") {
        Some(_) => invariants_from_roots(curve_from_gamma(flags.real("gamma")?)?),
        None => Invariants::new(file.g2.into(), file.g3.into()),
    };
    let tol = Tolerances::default();
    let params = ConformalParams::new(
        file.d.into(),
        file.zplus.into(),
        file.zminus.into(),
        file.hplus,
        file.hminus,
        inv,
        &tol,
    )?;

    if let Some(trace_path) = flags.values.get("trace") {
        let raw = std::fs::read_to_string(trace_path)
            .map_err(|e| usage_err(format!("cannot read {trace_path}: {e}")))?;
        let records: Vec<ComplexRecord> =
            serde_json::from_str(&raw).map_err(|e| usage_err(format!("bad trace file: {e}")))?;
        let zs: Vec<Complex64> = records.into_iter().map(Complex64::from).collect();
        let qs = trace_q(&params, &zs, &tol)?;
        if flags.json {
            let obj: Vec<_> = zs
                .iter()
                .zip(&qs)
                .map(|(z, q)| json!({"z": crec(*z), "q": crec(*q)}))
                .collect();
            let _ = writeln!(out, "{}", serde_json::Value::Array(obj));
        } else {
            for (z, q) in zs.iter().zip(&qs) {
                let _ = writeln!(out, "{} -> {}", fmt_c(*z), fmt_c(*q));
            }
        }
        return Ok(());
    }

    let z = flags.complex("z")?;
    let q = eval_q(&params, z, &tol)?;
    if flags.json {
        let _ = writeln!(out, "{}", json!({"q": crec(q)}));
    } else {
        let _ = writeln!(out, "Q = {}", fmt_c(q));
    }
    Ok(())
}
