//! Command line front end: scene ingestion, subcommand dispatch and JSON
//! reports. Every run prints exactly one JSON document on standard output.
//!
//! Exit status: 0 success, 1 parse or argument errors (and oracle
//! mismatches), 2 theorem hypothesis not met, 3 size-limit abort.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::autmap::{PlaneAut, Point};
use crate::classify::{classify_canonical, group_algebraicity, symmetry_group, CurveDescriptor};
use crate::closure::{component_cycle, hat_vs_bar, trichotomy, CycleBounds};
use crate::error::{Error, Result};
use crate::oracle::{default_grid, verify_theorem_grid, GridSpec};
use crate::orbit::{cyclic_orbit, galois_saturate, group_orbit, OrbitSample};
use crate::scene::{Bounds, Scene, SceneOptions};
use crate::stabilizer::{
    cyclic_orbit_stabilizer, dynamical_degree, isotropy, membership, membership_set, orbit_stabilizer, StabOptions,
    StabilizerDescriptor,
};

#[derive(Parser, Debug)]
#[command(
    name = "orbitstab",
    version,
    about = "Orbits, orbit closures and orbit stabilizers of plane polynomial automorphisms"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Target {
    /// Scene file (JSON).
    #[arg(long)]
    pub scene: PathBuf,
    /// Automorphism name; repeat for a group orbit.
    #[arg(long = "aut")]
    pub aut: Vec<String>,
    #[arg(long)]
    pub point: Option<String>,
    /// Named finite point set (instead of an orbit).
    #[arg(long = "set")]
    pub set: Option<String>,
    /// Named curve (instead of the detected orbit closure).
    #[arg(long)]
    pub curve: Option<String>,
    /// Exponent window for cyclic orbits.
    #[arg(short = 'N')]
    pub n: Option<usize>,
    /// Word length for group orbits.
    #[arg(short = 'L')]
    pub l: Option<usize>,
    /// Interpolation degree bound.
    #[arg(short = 'D')]
    pub d: Option<u32>,
    #[arg(long)]
    pub lmax: Option<usize>,
    /// Number of iterates for the dynamical degree.
    #[arg(short = 'M')]
    pub m: Option<usize>,
    /// Coefficient bit-size cap.
    #[arg(long = "bit-cap")]
    pub bit_cap: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Orbit window (one --aut: cyclic; several: breadth-first words).
    Orbit(Target),
    /// Finite / curve / no-curve verdict and the base-field comparison.
    Closure(Target),
    /// Component cycle of a cyclic orbit closure.
    Components(Target),
    /// Canonical type and symmetry group of a curve.
    Classify(Target),
    /// Point stabilizer inside the symmetry group of a canonical curve.
    Isotropy(Target),
    /// Stabilizer of the orbit of a subgroup of the symmetry group.
    Stabilizer(Target),
    /// Stabilizer of a cyclic orbit, with window, closures and components.
    Cyclic(Target),
    /// Whether --psi maps the orbit (or point set) onto itself.
    Membership {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        psi: String,
    },
    /// Degree sequence of iterates.
    Ddeg(Target),
    /// Exhaustive finite-field check of the stabilizer formulas.
    Verify {
        /// "default" or a grid spec file.
        #[arg(long, default_value = "default")]
        grid: String,
        /// Write the full per-instance report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse { .. } => "parse",
        Error::InvalidField(_) => "invalid_field",
        Error::FieldMismatch(_) => "field_mismatch",
        Error::DivisionByZero => "division_by_zero",
        Error::NotInvertible(_) => "not_invertible",
        Error::NotInFamily(_) => "not_in_family",
        Error::HypothesisNotMet(_) => "hypothesis_not_met",
        Error::SizeLimit { .. } => "size_limit",
        Error::CycleNotResolved(_) => "cycle_not_resolved",
        Error::InvalidArgument(_) => "invalid_argument",
    }
}

pub fn error_json(e: &Error) -> Value {
    json!({"error": {"kind": error_kind(e), "message": e.to_string(), "exit_code": e.exit_code()}})
}

fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Parses arguments (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => {
                    let err = Error::parse("command line", text.trim().to_string());
                    Outcome {
                        code: 1,
                        stdout: render(&error_json(&err)),
                        stderr: text,
                    }
                }
            };
        }
    };
    match execute(&cli.command) {
        Ok((v, code)) => Outcome {
            code,
            stdout: render(&v),
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: render(&error_json(&e)),
            stderr: format!("orbitstab: {e}\n"),
        },
    }
}

struct Ctx {
    scene: Scene,
    bounds: Bounds,
    t: Target,
}

impl Ctx {
    fn new(t: &Target) -> Result<Ctx> {
        let scene = Scene::load(&t.scene)?;
        let flags = SceneOptions {
            n: t.n,
            l: t.l,
            d: t.d,
            lmax: t.lmax,
            m: t.m,
            bit_cap: t.bit_cap,
        };
        let bounds = flags.over(&scene.options).resolve();
        Ok(Ctx {
            scene,
            bounds,
            t: t.clone(),
        })
    }

    fn auts(&self) -> Result<Vec<PlaneAut>> {
        self.t.aut.iter().map(|n| self.scene.automorphism(n).cloned()).collect()
    }

    fn one_aut(&self) -> Result<PlaneAut> {
        match self.t.aut.as_slice() {
            [n] => self.scene.automorphism(n).cloned(),
            _ => Err(Error::InvalidArgument("this command needs exactly one --aut".into())),
        }
    }

    fn point(&self) -> Result<Point> {
        let name = self
            .t
            .point
            .as_deref()
            .ok_or_else(|| Error::InvalidArgument("--point is required".into()))?;
        self.scene.point(name).cloned()
    }

    fn cycle_bounds(&self) -> CycleBounds {
        CycleBounds {
            n: self.bounds.n,
            d: self.bounds.d,
            lmax: self.bounds.lmax,
            bit_cap: self.bounds.bit_cap,
        }
    }

    fn stab_options(&self) -> StabOptions {
        StabOptions {
            l: self.bounds.l,
            d: self.bounds.d,
            bit_cap: self.bounds.bit_cap,
            ..StabOptions::default()
        }
    }

    /// Cyclic window for one automorphism, breadth-first words otherwise.
    fn orbit(&self) -> Result<OrbitSample> {
        let gens = self.auts()?;
        let p = self.point()?;
        match gens.as_slice() {
            [] => Err(Error::InvalidArgument("at least one --aut is required".into())),
            [phi] => cyclic_orbit(phi, &p, self.bounds.n, self.bounds.bit_cap),
            _ => group_orbit(&gens, &p, self.bounds.l, self.bounds.bit_cap),
        }
    }

    /// The named curve, or the detected closure of the orbit.
    fn curve_descriptor(&self) -> Result<(CurveDescriptor, Value)> {
        if let Some(name) = &self.t.curve {
            let f = self.scene.curve(name)?;
            return Ok((classify_canonical(f), json!({"source": "scene", "name": name})));
        }
        let sample = self.orbit()?;
        let rep = trichotomy(&sample, self.bounds.d);
        match rep.curve() {
            Some(f) => Ok((
                classify_canonical(f),
                json!({"source": "orbit closure", "closure": rep.to_json()}),
            )),
            None => Err(Error::HypothesisNotMet(format!(
                "the orbit closure is not a curve of degree <= {}",
                self.bounds.d
            ))),
        }
    }
}

fn bounds_json(b: &Bounds) -> Value {
    json!({"N": b.n, "L": b.l, "D": b.d, "lmax": b.lmax, "M": b.m, "bit_cap": b.bit_cap})
}

fn execute(cmd: &Command) -> Result<(Value, i32)> {
    let (ctx, command, mut out) = match cmd {
        Command::Verify { grid, out } => return verify(grid, out.as_ref()),
        Command::Orbit(t) => (Ctx::new(t)?, "orbit", json!({})),
        Command::Closure(t) => (Ctx::new(t)?, "closure", json!({})),
        Command::Components(t) => (Ctx::new(t)?, "components", json!({})),
        Command::Classify(t) => (Ctx::new(t)?, "classify", json!({})),
        Command::Isotropy(t) => (Ctx::new(t)?, "isotropy", json!({})),
        Command::Stabilizer(t) => (Ctx::new(t)?, "stabilizer", json!({})),
        Command::Cyclic(t) => (Ctx::new(t)?, "cyclic", json!({})),
        Command::Membership { target, .. } => (Ctx::new(target)?, "membership", json!({})),
        Command::Ddeg(t) => (Ctx::new(t)?, "ddeg", json!({})),
    };
    out["command"] = json!(command);
    out["scene"] = json!(ctx.scene.name);
    out["bounds"] = bounds_json(&ctx.bounds);
    let mut code = 0;
    let result = match cmd {
        Command::Orbit(_) => json!({"orbit": ctx.orbit()?.to_json()}),
        Command::Closure(_) => closure(&ctx)?,
        Command::Components(_) => {
            let c = component_cycle(&ctx.one_aut()?, &ctx.point()?, ctx.cycle_bounds())?;
            json!({"components": c.to_json(), "verified": c.verified()})
        }
        Command::Classify(_) => {
            let (desc, source) = ctx.curve_descriptor()?;
            let g = symmetry_group(&desc)?;
            let alg = group_algebraicity(&g);
            json!({
                "curve": source,
                "classification": desc.to_json(),
                "symmetry_group": g.to_json(),
                "algebraic": {"is_algebraic": alg.is_algebraic, "reason": alg.reason},
            })
        }
        Command::Isotropy(_) => {
            let (desc, source) = ctx.curve_descriptor()?;
            json!({"curve": source, "isotropy": isotropy(&desc, &ctx.point()?)?.to_json()})
        }
        Command::Stabilizer(_) => {
            let (desc, source) = ctx.curve_descriptor()?;
            let s = orbit_stabilizer(&desc, &ctx.point()?, &ctx.auts()?, ctx.stab_options())?;
            if s.verification.as_ref().is_some_and(|v| !v.all_passed()) {
                code = 1;
            }
            json!({"curve": source, "classification": desc.to_json(), "stabilizer": s.to_json()})
        }
        Command::Cyclic(_) => cyclic(&ctx, &mut code)?,
        Command::Membership { psi, .. } => membership_cmd(&ctx, psi)?,
        Command::Ddeg(_) => {
            let dd = dynamical_degree(&ctx.one_aut()?, ctx.bounds.m, ctx.bounds.bit_cap)?;
            json!({"dynamical_degree": dd.to_json()})
        }
        Command::Verify { .. } => unreachable!(),
    };
    if let (Value::Object(o), Value::Object(r)) = (&mut out, result) {
        o.extend(r);
    }
    Ok((out, code))
}

fn closure(ctx: &Ctx) -> Result<Value> {
    let (points, source) = match &ctx.t.set {
        Some(name) => (ctx.scene.point_set(name)?.clone(), json!({"point_set": name})),
        None => {
            let s = ctx.orbit()?;
            let src = json!({"orbit": {"size": s.len(), "exhausted": s.exhausted, "bound": s.bound}});
            let rep = trichotomy(&s, ctx.bounds.d);
            let hb = hat_vs_bar(&s.point_list(), ctx.bounds.d);
            return Ok(json!({"source": src, "closure": rep.to_json(), "hat_vs_bar": hb.to_json()}));
        }
    };
    let hb = hat_vs_bar(&points, ctx.bounds.d);
    Ok(json!({"source": source, "points": points.len(), "hat_vs_bar": hb.to_json()}))
}

fn cyclic(ctx: &Ctx, code: &mut i32) -> Result<Value> {
    let phi = ctx.one_aut()?;
    let p = ctx.point()?;
    let sample = cyclic_orbit(&phi, &p, ctx.bounds.n, ctx.bounds.bit_cap)?;
    let rep = trichotomy(&sample, ctx.bounds.d);
    let hb = hat_vs_bar(&sample.point_list(), ctx.bounds.d);
    let mut out = json!({
        "orbit": sample.to_json(),
        "closure": rep.to_json(),
        "hat_vs_bar": hb.to_json(),
    });
    match cyclic_orbit_stabilizer(&phi, &p, ctx.cycle_bounds(), 2 * ctx.bounds.n) {
        Ok(s) => out["stabilizer"] = s.to_json(),
        Err(e) => {
            *code = e.exit_code();
            out["stabilizer"] = error_json(&e);
        }
    }
    Ok(out)
}

/// The stabilizer descriptor used to sharpen membership verdicts, when one
/// can be computed for the orbit.
fn orbit_descriptor(ctx: &Ctx, sample: &OrbitSample) -> Option<StabilizerDescriptor> {
    let gens = ctx.auts().ok()?;
    if let [phi] = gens.as_slice() {
        return cyclic_orbit_stabilizer(phi, &sample.base_point, ctx.cycle_bounds(), 2 * ctx.bounds.n).ok();
    }
    let f = trichotomy(sample, ctx.bounds.d).curve()?.clone();
    orbit_stabilizer(&classify_canonical(&f), &sample.base_point, &gens, ctx.stab_options()).ok()
}

fn membership_cmd(ctx: &Ctx, psi_name: &str) -> Result<Value> {
    let psi = ctx.scene.automorphism(psi_name)?;
    let bare = match (&ctx.t.set, ctx.t.aut.is_empty()) {
        (Some(name), _) => Some(ctx.scene.point_set(name)?.clone()),
        (None, true) => Some(vec![ctx.point()?]),
        (None, false) => None,
    };
    if let Some(delta) = bare {
        let hat = galois_saturate(&delta);
        return Ok(json!({
            "psi": psi.to_string(),
            "delta": {"points": delta.iter().map(Point::to_json).collect::<Vec<_>>(), "membership": membership_set(psi, &delta).to_json()},
            "delta_hat": {"points": hat.iter().map(Point::to_json).collect::<Vec<_>>(), "membership": membership_set(psi, &hat).to_json()},
        }));
    }
    let sample = ctx.orbit()?;
    let stab = orbit_descriptor(ctx, &sample);
    let rep = membership(psi, &sample, stab.as_ref());
    Ok(json!({
        "psi": psi.to_string(),
        "membership": rep.to_json(),
        "stabilizer_case": stab.as_ref().map(|s| s.case_tag.name()),
    }))
}

fn verify(grid: &str, out: Option<&PathBuf>) -> Result<(Value, i32)> {
    let spec: GridSpec = if grid == "default" {
        default_grid()
    } else {
        let src = std::fs::read_to_string(grid).map_err(|e| Error::parse(grid, e.to_string()))?;
        serde_json::from_str(&src).map_err(|e| {
            Error::parse(
                format!("{grid}: line {} column {}", e.line(), e.column()),
                e.to_string(),
            )
        })?
    };
    let report = verify_theorem_grid(&spec)?;
    if let Some(path) = out {
        std::fs::write(path, render(&report.to_json()))
            .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))?;
    }
    let code = if report.all_matched() { 0 } else { 1 };
    Ok((
        json!({"command": "verify", "grid": grid, "summary": report.summary_json(), "report": out.map(|p| p.display().to_string())}),
        code,
    ))
}
