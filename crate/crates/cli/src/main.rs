use std::fmt::Write as _;
use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use cartier_core::agc::{
    self, bound_dim_thm_b, bound_stichtenoth, c_omega, cartier_code_with, check_bounds, check_cartier_goppa,
    check_codim_theorem, check_equality_theorem, check_example_goppa, params, AgInstance, BoundReport,
};
use cartier_core::cartier::CartierCtx;
use cartier_core::codes::LinearCode;
use cartier_core::curve::{Curve, Differential, Divisor, FuncElem, Place};
use cartier_core::ff::{mk_field, Field, FieldTower};
use cartier_core::goppa::{check_goppa_identity, goppa_code, random_instance, GoppaInstance};
use cartier_core::klein;
use cartier_core::polymat::Poly;
use cartier_core::text::{parse_curve, parse_divisor, parse_element_list, parse_field, parse_mpoly, parse_place};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "cartier", version, about = "Goppa, AG and Cartier codes on plane curves over finite fields")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// Field description, inline (`field p=2 m=3`) or a file containing one.
    #[arg(long, global = true)]
    field: Option<String>,
    /// Curve file (or inline `curve field=... poly=...`).
    #[arg(long, global = true)]
    curve: Option<String>,
    #[arg(long = "divisor-G", global = true)]
    divisor_g: Option<String>,
    /// Defaults to every rational point outside the support of G.
    #[arg(long = "divisor-D", global = true)]
    divisor_d: Option<String>,
    /// Size of the base field F_q; defaults to the characteristic.
    #[arg(long = "base-q", global = true)]
    base_q: Option<u64>,
    /// Largest number of codewords a minimum-distance search may visit.
    #[arg(long, global = true, default_value_t = agc::DEFAULT_BUDGET)]
    budget: u128,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Bits,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classical Goppa code Γ_q(L, f).
    Goppa {
        /// Comma-separated support elements.
        #[arg(long)]
        support: String,
        /// Comma-separated coefficients of f, constant term first.
        #[arg(long)]
        gpoly: String,
    },
    /// C_Ω(D, G) and its subfield subcode.
    Agcode,
    /// Car_q(D, G).
    CartierCode,
    /// Cartier operator on differentials.
    Cartier {
        #[command(subcommand)]
        op: CartierOp,
    },
    /// Check one theorem on an instance or on seeded random instances.
    Verify {
        #[arg(long, value_enum)]
        theorem: Theorem,
        /// Number of random instances instead of the files.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long = "divisor-G1")]
        divisor_g1: Option<String>,
        #[arg(long)]
        support: Option<String>,
        #[arg(long)]
        gpoly: Option<String>,
    },
    /// The Klein quartic example end to end.
    KleinDemo,
    /// Generator matrix of a code.
    Export {
        #[arg(long, value_enum, default_value_t = Which::Cartier)]
        code: Which,
    },
}

#[derive(Subcommand)]
enum CartierOp {
    /// Prints C^a(h dx) as a coefficient of dx.
    Apply {
        #[arg(long)]
        form: String,
        #[arg(long, default_value_t = 1)]
        iterate: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Theorem {
    GoppaEq,
    CartierEq,
    Codim,
    DimA,
    DimB,
    #[value(name = "example-32")]
    Example32,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Cartier,
    Omega,
    Subfield,
}

/// Refusals and parse failures (exit 1) versus failed checks (exit 2).
enum Outcome {
    Pass(String),
    Violated(String),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(j) = cli.common.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let res = run(&cli);
    match &res {
        Ok(Outcome::Pass(s)) | Ok(Outcome::Violated(s)) => print!("{s}"),
        Err(e) => eprintln!("error: {e:#}"),
    }
    ExitCode::from(exit_code(&res))
}

fn exit_code(res: &Result<Outcome>) -> u8 {
    match res {
        Ok(Outcome::Pass(_)) => 0,
        Ok(Outcome::Violated(_)) => 2,
        Err(_) => 1,
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    let c = &cli.common;
    match &cli.cmd {
        Cmd::Goppa { support, gpoly } => {
            let inst = goppa_from_args(c, support, gpoly)?;
            let code = goppa_code(&inst)?;
            let mut s = format!("Gamma(L,f) {}\n", params(&code, c.budget));
            s.push_str(&code_body(&code, c.format)?);
            Ok(Outcome::Pass(s))
        }
        Cmd::Agcode => {
            let inst = instance(c)?;
            let om = c_omega(&inst)?;
            let sub = om.subfield_subcode(&inst.tower)?;
            let mut s = String::new();
            writeln!(s, "C_Omega(D,G) {}", params(&om, c.budget))?;
            writeln!(s, "C_Omega(D,G)|F_{} {}", inst.q(), params(&sub, c.budget))?;
            Ok(Outcome::Pass(s))
        }
        Cmd::CartierCode => {
            let inst = instance(c)?;
            let ctx = CartierCtx::new(&inst.curve, inst.tower.clone())?;
            let fs = ctx.fixed_space(&inst.g, &inst.d_divisor())?;
            let car = cartier_code_with(&ctx, &inst)?;
            let mut s = format!("Car_{}(D,G) {}\n", inst.q(), params(&car, c.budget));
            for w in &fs.basis {
                writeln!(s, "  {}", w.format())?;
            }
            Ok(Outcome::Pass(s))
        }
        Cmd::Cartier { op: CartierOp::Apply { form, iterate } } => {
            let curve = load_curve(c)?;
            let h = FuncElem::from_mpoly(&curve, &parse_mpoly(curve.field(), form)?);
            let op = cartier_core::cartier::CartierOp::new(&curve)?;
            let w = op.iterate(&Differential::new(h), *iterate)?;
            Ok(Outcome::Pass(format!("{}\n", w.format())))
        }
        Cmd::Verify { theorem, random, divisor_g1, support, gpoly } => {
            verify(c, *theorem, *random, divisor_g1.as_deref(), support.as_deref(), gpoly.as_deref())
        }
        Cmd::KleinDemo => klein_demo(c),
        Cmd::Export { code } => {
            let inst = instance(c)?;
            let out = match code {
                Which::Cartier => agc::cartier_code(&inst)?,
                Which::Omega => c_omega(&inst)?,
                Which::Subfield => agc::subfield_code(&inst)?,
            };
            Ok(Outcome::Pass(code_body(&out, c.format)?))
        }
    }
}

fn code_body(code: &LinearCode, f: Format) -> Result<String> {
    Ok(match f {
        Format::Text => code.to_text(),
        Format::Bits => code.to_bits()?,
    })
}

/// File contents when `arg` names an existing file, otherwise `arg` itself.
fn text_arg(arg: &str) -> Result<String> {
    if Path::new(arg).is_file() {
        std::fs::read_to_string(arg).with_context(|| format!("reading {arg}"))
    } else {
        Ok(arg.to_string())
    }
}

fn first_line(text: &str) -> Result<String> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .map(str::to_string)
        .ok_or_else(|| anyhow!("empty input"))
}

fn load_field(c: &Common) -> Result<Option<Field>> {
    c.field.as_deref().map(|f| Ok(parse_field(&first_line(&text_arg(f)?)?)?)).transpose()
}

fn load_curve(c: &Common) -> Result<Curve> {
    let arg = c.curve.as_deref().ok_or_else(|| anyhow!("--curve is required"))?;
    Ok(parse_curve(&first_line(&text_arg(arg)?)?)?)
}

fn tower_for(ext: &Field, base_q: Option<u64>) -> Result<Arc<FieldTower>> {
    let p = ext.p() as u64;
    let q = base_q.unwrap_or(p);
    let mut m = 0;
    let mut pm = 1u64;
    while pm < q {
        pm *= p;
        m += 1;
    }
    if pm != q || m == 0 || !ext.m().is_multiple_of(m) {
        bail!("--base-q {q} is not a subfield size of F_{}", ext.size());
    }
    let base = if m == ext.m() { ext.clone() } else { mk_field(ext.p(), m, None)? };
    Ok(Arc::new(FieldTower::new(&base, ext)?))
}

fn load_divisor(curve: &Curve, arg: &str) -> Result<Divisor> {
    Ok(parse_divisor(curve, &text_arg(arg)?)?)
}

fn instance(c: &Common) -> Result<AgInstance> {
    let curve = load_curve(c)?;
    let g = match &c.divisor_g {
        Some(a) => load_divisor(&curve, a)?,
        None => bail!("--divisor-G is required"),
    };
    let d: Vec<Place> = match &c.divisor_d {
        Some(a) => {
            let d = load_divisor(&curve, a)?;
            if d.iter().any(|(_, &n)| n != 1) {
                bail!("--divisor-D must be a sum of distinct places");
            }
            d.support().cloned().collect()
        }
        None => curve.rational_points()?.into_iter().filter(|p| g.coeff(p) == 0).collect(),
    };
    let mut inst = AgInstance::new(&curve, d, g, tower_for(curve.field(), c.base_q)?)?;
    inst.budget = c.budget;
    Ok(inst)
}

fn goppa_from_args(c: &Common, support: &str, gpoly: &str) -> Result<GoppaInstance> {
    let k = load_field(c)?.ok_or_else(|| anyhow!("--field is required"))?;
    let t = tower_for(&k, c.base_q)?;
    let l = parse_element_list(&k, support)?;
    let f = Poly::new(&k, parse_element_list(&k, gpoly)?);
    Ok(GoppaInstance::new(t, l, f)?)
}

fn random_towers(c: &Common) -> Result<Vec<Arc<FieldTower>>> {
    match load_field(c)? {
        Some(k) => Ok(vec![tower_for(&k, c.base_q)?]),
        None => Ok(vec![tower_for(&mk_field(2, 2, None)?, None)?, tower_for(&mk_field(2, 3, None)?, None)?]),
    }
}

fn tally(reports: Vec<(String, bool)>) -> Outcome {
    let held = reports.iter().filter(|(_, ok)| *ok).count();
    let mut s = String::new();
    for (r, _) in &reports {
        s.push_str(r);
    }
    let _ = writeln!(s, "{held}/{} hold", reports.len());
    if held == reports.len() {
        Outcome::Pass(s)
    } else {
        Outcome::Violated(s)
    }
}

fn one(r: BoundReport) -> Outcome {
    if r.holds() {
        Outcome::Pass(r.to_text())
    } else {
        Outcome::Violated(r.to_text())
    }
}

fn verify(
    c: &Common,
    theorem: Theorem,
    random: Option<usize>,
    g1: Option<&str>,
    support: Option<&str>,
    gpoly: Option<&str>,
) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    match theorem {
        Theorem::GoppaEq | Theorem::Example32 => {
            let insts = match (random, support, gpoly) {
                (Some(n), _, _) => {
                    let towers = random_towers(c)?;
                    (0..n)
                        .map(|i| random_instance(&towers[i % towers.len()], &mut rng, 16, 3))
                        .collect::<cartier_core::Result<Vec<_>>>()?
                }
                (None, Some(s), Some(g)) => vec![goppa_from_args(c, s, g)?],
                _ => bail!("give --random N or --field, --support and --gpoly"),
            };
            let mut out = Vec::new();
            for (i, inst) in insts.iter().enumerate() {
                let k = inst.tower.ext();
                let head = format!(
                    "#{i} F_{}/F_{} n={} f={}\n",
                    k.size(),
                    inst.tower.q(),
                    inst.n(),
                    inst.f.format("x")
                );
                if matches!(theorem, Theorem::GoppaEq) {
                    let r = check_goppa_identity(inst, Some(c.budget))?;
                    let d = r.d.map(|d| d.to_string()).unwrap_or_else(|| "-".into());
                    let dist_ok = r.d.and_then(|d| d.exact()).is_none_or(|d| d as i64 >= r.designed_distance);
                    let ok = r.holds && dist_ok && r.k_lhs as i64 >= r.dimension_bound;
                    let line = format!(
                        "{head}  Gamma(L,f^(q-1)) = Gamma(L,f^q): {} k={} d={} (k>={}, d>={})\n",
                        r.holds, r.k_lhs, d, r.dimension_bound, r.designed_distance
                    );
                    out.push((line, ok));
                } else {
                    let r = check_example_goppa(inst)?;
                    out.push((format!("{head}{}", r.to_text()), r.holds()));
                }
            }
            Ok(tally(out))
        }
        Theorem::CartierEq => match random {
            Some(n) => {
                let mut out = Vec::new();
                let towers = random_towers(c)?;
                for i in 0..n {
                    let inst = random_instance(&towers[i % towers.len()], &mut rng, 12, 2)?;
                    let r = check_cartier_goppa(&inst)?;
                    let (line, d, e, inf) = agc::line_setup(&inst)?;
                    let q = inst.tower.q() as i64;
                    let ag = AgInstance::new(&line, d, e.scale(q - 1).sub(&Divisor::single(inf, 1)), inst.tower.clone())?;
                    let eq = check_equality_theorem(&ag)?;
                    let ok = r.holds() && eq.holds();
                    out.push((format!("#{i}\n{}{}", r.to_text(), eq.to_text()), ok));
                }
                Ok(tally(out))
            }
            None => Ok(one(check_equality_theorem(&instance(c)?)?)),
        },
        Theorem::Codim => {
            let inst = instance(c)?;
            let g1 = load_divisor(&inst.curve, g1.ok_or_else(|| anyhow!("--divisor-G1 is required"))?)?;
            Ok(one(check_codim_theorem(&inst, &g1)?))
        }
        Theorem::DimA => {
            let inst = instance(c)?;
            let g1 = load_divisor(&inst.curve, g1.ok_or_else(|| anyhow!("--divisor-G1 is required"))?)?;
            agc::bound_dim_thm_a(&inst, &g1)?;
            Ok(one(check_bounds(&inst, Some(&g1))?))
        }
        Theorem::DimB => {
            let inst = instance(c)?;
            bound_dim_thm_b(&inst)?;
            Ok(one(check_bounds(&inst, None)?))
        }
    }
}

fn klein_demo(c: &Common) -> Result<Outcome> {
    let s = match &c.curve {
        Some(_) => {
            let curve = load_curve(c)?;
            let p = ["(0:1:0)", "(0:0:1)", "(1:0:0)"]
                .map(|t| parse_place(&curve, t))
                .into_iter()
                .collect::<cartier_core::Result<Vec<_>>>()?;
            let g0 = match &c.divisor_g {
                Some(a) => load_divisor(&curve, a)?,
                None => klein::setup_on(curve.clone())?.g0,
            };
            let rest: Vec<Place> = curve.rational_points()?.into_iter().filter(|q| !p.contains(q)).collect();
            (curve, Divisor::sum_of(&rest), g0, Divisor::sum_of(&p))
        }
        None => {
            let k = klein::setup()?;
            (k.curve, k.d, k.g0, k.g_minus)
        }
    };
    let (curve, d, g0, gm) = s;
    let tower = tower_for(curve.field(), c.base_q.or(Some(curve.field().p() as u64)))?;
    let pts: Vec<Place> = d.support().cloned().collect();
    let mut out = String::new();
    writeln!(out, "curve {}", curve.format())?;
    writeln!(out, "genus {}", curve.genus())?;
    writeln!(out, "rational points {}", curve.rational_points()?.len())?;
    writeln!(out, "n = {}, q = {}, l = {}", pts.len(), tower.q(), tower.ell())?;
    let g1 = g0.sub(&gm);
    let g2 = g0.scale(2).sub(&gm);
    writeln!(out, "h1(G0-G-) = {}", curve.h1(&g1)?)?;
    writeln!(out, "h1(-G-) = {}", curve.h1(&gm.neg())?)?;
    let a = {
        let mut i = AgInstance::new(&curve, pts.clone(), g1.clone(), tower.clone())?;
        i.budget = c.budget;
        i
    };
    let b = a.with_g(g2.clone())?;
    let ctx = CartierCtx::new(&curve, tower.clone())?;
    let car_a = cartier_code_with(&ctx, &a)?;
    let sub_a = agc::subfield_code(&a)?;
    let car_b = cartier_code_with(&ctx, &b)?;
    let sub_b = agc::subfield_code(&b)?;
    let q = tower.q();
    writeln!(out, "Car_{q}(D, G0-G-)        {}", params(&car_a, c.budget))?;
    writeln!(out, "C_Omega(D, G0-G-)|F_{q}  {}", params(&sub_a, c.budget))?;
    writeln!(out, "Car_{q}(D, 2G0-G-)       {}", params(&car_b, c.budget))?;
    writeln!(out, "C_Omega(D, 2G0-G-)|F_{q} {}", params(&sub_b, c.budget))?;

    let mut ok = true;
    let eq = car_a.code_eq(&car_b)?;
    writeln!(out, "Car_{q}(D, G0-G-) = Car_{q}(D, 2G0-G-): {eq}")?;
    if a.g.g_u(q as i64) == g0 {
        ok &= eq;
    }
    let codim = check_codim_theorem(&a, &gm.neg())?;
    writeln!(
        out,
        "codimension {} <= {}",
        codim.value("codimension").unwrap_or("?"),
        tower.ell() as usize * curve.h1(&gm.neg())?
    )?;
    ok &= codim.holds();
    match check_codim_theorem(&b, &g1) {
        Ok(r) => {
            let same = car_b.code_eq(&sub_b)?;
            writeln!(out, "Car_{q}(D, 2G0-G-) = C_Omega(D, 2G0-G-)|F_{q}: {same}")?;
            ok &= r.holds();
        }
        Err(e) => writeln!(out, "codimension theorem for 2G0-G-: {e}")?,
    }
    match (bound_dim_thm_b(&b), bound_stichtenoth(&b, &g1)) {
        (Ok(tb), Ok(st)) => {
            writeln!(out, "dimension bound (direct) {tb}, Stichtenoth {st}, actual {}", sub_b.k())?;
            ok &= sub_b.k() as i64 >= tb && sub_b.k() as i64 >= st;
        }
        (r1, r2) => {
            for e in [r1.err(), r2.err()].into_iter().flatten() {
                writeln!(out, "dimension bound: {e}")?;
            }
        }
    }
    let bounds = check_bounds(&b, Some(&g1))?;
    ok &= bounds.holds();
    writeln!(out, "all bounds hold: {}", bounds.holds())?;
    Ok(if ok { Outcome::Pass(out) } else { Outcome::Violated(out) })
}
