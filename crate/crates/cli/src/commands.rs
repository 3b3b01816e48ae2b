use std::fmt;
use std::io::Read;

use profpush::json::{self, CodecError, Decoder};
use profpush::{
    constant_pushforward, equation_profile, frobenius_profile, herbrand_jumps,
    herbrand_multiradius, inseparable_p_profile, instantiate_family, irregularity, laplacian,
    laplacian_bound_check, laplacian_pushforward_check, multiradius_from_profile, n_function,
    off_centered_frobenius_profile, parse_rational, polygon, profile_from_series,
    pushforward_height, pushforward_profile, pushforward_radii, pushforward_radii_bruteforce,
    riemann_hurwitz_check, tame_profile, FiberConfiguration, FiberPoint, MorphismProfile, Rational,
    Scalar,
};
use serde_json::{json, Value};

use crate::{CheckCmd, Cli, Command, GenCmd, HerbrandCmd, ProfileCmd, PushforwardCmd};

#[derive(Debug)]
pub enum Failure {
    Input(String),
    Schema { source: String, err: CodecError },
    Domain(profpush::Error),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) => f.write_str(m),
            Failure::Schema { source, err } => write!(f, "{source}: {err}"),
            Failure::Domain(e) => write!(f, "{e}"),
        }
    }
}

impl From<profpush::Error> for Failure {
    fn from(e: profpush::Error) -> Self {
        Failure::Domain(e)
    }
}

/// A complete result; `agrees` is false when a check or oracle failed.
pub struct Outcome {
    pub value: Value,
    pub agrees: bool,
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Outcome {
            value,
            agrees: true,
        }
    }
}

type Res<T> = Result<T, Failure>;

struct Input {
    name: String,
    value: Value,
}

fn load(src: &str) -> Res<Input> {
    let trimmed = src.trim_start();
    let (name, text) = if src == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        ("stdin".to_string(), buf)
    } else if trimmed.starts_with('{') || trimmed.starts_with('[') {
        ("inline".to_string(), src.to_string())
    } else {
        let text =
            std::fs::read_to_string(src).map_err(|e| Failure::Input(format!("{src}: {e}")))?;
        (src.to_string(), text)
    };
    let value = serde_json::from_str(&text)
        .map_err(|e| Failure::Input(format!("{name}: invalid JSON: {e}")))?;
    Ok(Input { name, value })
}

impl Input {
    fn decode<T>(&self, f: impl FnOnce(&Value, &str) -> json::CodecResult<T>) -> Res<T> {
        f(&self.value, "").map_err(|err| Failure::Schema {
            source: self.name.clone(),
            err,
        })
    }
}

fn arg_rational(name: &str, s: &str) -> Res<Rational> {
    parse_rational(s).map_err(|_| Failure::Input(format!("--{name}: not a rational: {s:?}")))
}

fn r(x: &Rational) -> Value {
    Value::String(x.to_string())
}

fn gen_output(mp: &MorphismProfile) -> Value {
    let mut v = json::encode_pwm(mp.pwm());
    if !mp.is_etale() {
        v["etale"] = Value::Bool(false);
    }
    v
}

pub fn run(cli: &Cli) -> Res<Outcome> {
    let dec = Decoder::with_base(cli.base);
    match &cli.command {
        Command::Profile(cmd) => profile(&dec, cmd).map(Outcome::ok),
        Command::Pushforward(cmd) => pushforward(&dec, cmd),
        Command::Herbrand(HerbrandCmd::Jumps { input }) => {
            let mp = load(input)?.decode(|v, p| dec.profile(v, p))?;
            Ok(Outcome::ok(json::encode_ramification(&herbrand_jumps(
                &mp,
            )?)))
        }
        Command::Herbrand(HerbrandCmd::Radii { input }) => {
            let rd = load(input)?.decode(|v, p| dec.ramification(v, p))?;
            Ok(Outcome::ok(json::encode_multiradius(
                &herbrand_multiradius(&rd),
            )))
        }
        Command::Polygon { input } => {
            let mr = load(input)?.decode(|v, p| dec.multiradius(v, p))?;
            Ok(Outcome::ok(json::encode_polygon(&polygon(&mr))))
        }
        Command::Irregularity { input } => {
            let dm = load(input)?.decode(|v, p| dec.direction_model(v, p))?;
            let irr = irregularity(&dm);
            let irr = irr.to_int().map_or_else(|| r(&irr), |n| json!(n));
            Ok(Outcome::ok(json!({ "irregularity": irr })))
        }
        Command::Check(cmd) => check(&dec, cmd),
        Command::Gen(cmd) => generate(cmd).map(Outcome::ok),
    }
}

fn profile(dec: &Decoder, cmd: &ProfileCmd) -> Res<Value> {
    let pwm = |src: &str| load(src)?.decode(|v, p| dec.pwm(v, p));
    Ok(match cmd {
        ProfileCmd::FromSeries { input } => {
            let sv = load(input)?.decode(|v, p| dec.series(v, p))?;
            json::encode_pwm(&profile_from_series(&sv))
        }
        ProfileCmd::Compose { outer, inner } => {
            json::encode_pwm(&pwm(outer)?.compose(&pwm(inner)?))
        }
        ProfileCmd::Invert { input } => json::encode_pwm(&pwm(input)?.inverse()?),
        ProfileCmd::Pow { input, n } => json::encode_pwm(&pwm(input)?.pow(*n)),
        ProfileCmd::Mul { left, right } => json::encode_pwm(&pwm(left)?.mul(&pwm(right)?)),
        ProfileCmd::NFunction { input } => {
            let mp = load(input)?.decode(|v, p| dec.profile(v, p))?;
            json::encode_ndata(&n_function(&mp))
        }
    })
}

fn pushforward(dec: &Decoder, cmd: &PushforwardCmd) -> Res<Outcome> {
    let fiber = |src: &str| load(src)?.decode(|v, p| dec.fiber(v, p));
    match cmd {
        PushforwardCmd::Radii { input, oracle } => {
            let fc = fiber(input)?;
            let radii = pushforward_radii(&fc)?;
            let mut value = json::encode_multiradius(&radii);
            if !oracle {
                return Ok(Outcome::ok(value));
            }
            let by_phi = pushforward_radii_bruteforce(&fc)?;
            let ep = pushforward_profile(&fc)?;
            let by_profile = multiradius_from_profile(&ep);
            let agreement =
                by_phi == radii && by_profile == radii && ep == equation_profile(&radii);
            value["agreement"] = Value::Bool(agreement);
            if !agreement {
                value["phi_route"] = json::encode_multiradius(&by_phi);
                value["profile_route"] = json::encode_multiradius(&by_profile);
            }
            Ok(Outcome {
                value,
                agrees: agreement,
            })
        }
        PushforwardCmd::Profile { input } => Ok(Outcome::ok(json::encode_equation_profile(
            &pushforward_profile(&fiber(input)?)?,
        ))),
        PushforwardCmd::Constant { input, sep } => {
            let mp = load(input)?.decode(|v, p| dec.profile(v, p))?;
            Ok(Outcome::ok(json::encode_multiradius(
                &constant_pushforward(&mp, *sep)?,
            )))
        }
    }
}

fn check(dec: &Decoder, cmd: &CheckCmd) -> Res<Outcome> {
    match cmd {
        CheckCmd::Rh { input } => {
            let (g_y, g_x, d, branches) = load(input)?.decode(|v, p| {
                let obj = json::object(v, p)?;
                let num = |k: &str| {
                    let (x, xp) = json::field(obj, p, k)?;
                    json::int(x, &xp)
                };
                let (b, bp) = json::field(obj, p, "branches")?;
                let branches = json::list(b, &bp, |x, q| {
                    let (nu, dt) = json::pair(x, q)?;
                    Ok((
                        json::int(nu, &json::child(q, 0))?,
                        json::int(dt, &json::child(q, 1))?,
                    ))
                })?;
                Ok((num("g_y")?, num("g_x")?, num("degree")?, branches))
            })?;
            let holds = riemann_hurwitz_check(g_y, g_x, d, &branches);
            let correction: i64 = branches.iter().map(|(nu, dt)| nu + dt - 1).sum();
            Ok(Outcome {
                value: json!({
                    "holds": holds,
                    "lhs": 2 * g_y - 2,
                    "rhs": d * (2 * g_x - 2) + correction,
                }),
                agrees: holds,
            })
        }
        CheckCmd::Laplacian { input } => {
            let (dy, dx, rank, nus) = load(input)?.decode(|v, p| {
                let obj = json::object(v, p)?;
                let delta = |side: &str| -> json::CodecResult<i64> {
                    if let Some(x) = obj.get(&format!("delta_{side}")) {
                        return json::int(x, &json::child(p, format!("delta_{side}")));
                    }
                    let (x, xp) = json::field(obj, p, &format!("irregularities_{side}"))?;
                    Ok(laplacian(&json::list(x, &xp, json::int)?))
                };
                let (r, rp) = json::field(obj, p, "rank")?;
                let (n, np) = json::field(obj, p, "nus")?;
                Ok((
                    delta("y")?,
                    delta("x")?,
                    json::uint(r, &rp)?,
                    json::list(n, &np, json::int)?,
                ))
            })?;
            let holds = laplacian_pushforward_check(dy, dx, rank, &nus);
            Ok(Outcome {
                value: json!({
                    "holds": holds,
                    "delta_y": dy,
                    "delta_x": dx,
                    "expected_delta_y": dx + rank as i64 * nus.iter().sum::<i64>(),
                }),
                agrees: holds,
            })
        }
        CheckCmd::Height { input } => height(dec, input),
        CheckCmd::Bound { input } => {
            let (g, n, i, delta, eq) = load(input)?.decode(|v, p| {
                let obj = json::object(v, p)?;
                let (g, gp) = json::field(obj, p, "genus")?;
                let (n, np) = json::field(obj, p, "directions")?;
                let (i, ip) = json::field(obj, p, "index")?;
                let (d, dp) = json::field(obj, p, "delta")?;
                let eq = match obj.get("equality_expected") {
                    Some(b) => json::boolean(b, &json::child(p, "equality_expected"))?,
                    None => false,
                };
                Ok((
                    json::uint(g, &gp)?,
                    json::uint(n, &np)?,
                    json::uint(i, &ip)?,
                    json::int(d, &dp)?,
                    eq,
                ))
            })?;
            let report = laplacian_bound_check(g, n, i, delta, eq)?;
            Ok(Outcome {
                agrees: report.consistent,
                value: json::encode_bound_report(&report),
            })
        }
    }
}

/// Height of the pushforward at one parameter `u`, by the engine and by the
/// closed formula.
fn height(dec: &Decoder, input: &str) -> Res<Outcome> {
    let doc = load(input)?;
    let (dir, family, model, u, sep) = doc.decode(|v, p| {
        let obj = json::object(v, p)?;
        let (d, dp) = json::field(obj, p, "direction")?;
        let (f, fp) = json::field(obj, p, "family")?;
        let (m, mp) = json::field(obj, p, "model")?;
        let (u, up) = json::field(obj, p, "u")?;
        let sep = match obj.get("sep_degree") {
            Some(s) => json::uint(s, &json::child(p, "sep_degree"))?,
            None => 1,
        };
        Ok((
            dec.annulus_direction(d, &dp)?,
            dec.profile_family(f, &fp)?,
            dec.direction_model(m, &mp)?,
            json::rational(u, &up)?,
            sep,
        ))
    })?;
    let mp = instantiate_family(&family, &u)?;
    if sep * mp.degree() != dir.d() {
        return Err(Failure::Input(format!(
            "{}: sep_degree × profile degree = {} but the direction has d = {}",
            doc.name,
            sep * mp.degree(),
            dir.d()
        )));
    }
    let e = model.multiradius_at(&u)?;
    let rank = e.rank();
    let point = FiberPoint::new("y", mp, sep, e.clone())?;
    let fc = FiberConfiguration::new(rank, vec![point])?;
    let engine = pushforward_radii(&fc)?.height();
    let formula = pushforward_height(&dir, rank as u64, &e.height(), &u);
    let agree = engine == formula;
    Ok(Outcome {
        value: json!({ "u": r(&u), "engine": r(&engine), "formula": r(&formula), "agree": agree }),
        agrees: agree,
    })
}

fn generate(cmd: &GenCmd) -> Res<Value> {
    let mp = match cmd {
        GenCmd::Frobenius(prime) => frobenius_profile(prime.p)?,
        GenCmd::Tame => tame_profile(),
        GenCmd::Inseparable { prime, delta } => {
            inseparable_p_profile(prime.p, arg_rational("delta", delta)?)?
        }
        GenCmd::OffFrobenius { prime, val_a, u } => off_centered_frobenius_profile(
            prime.p,
            arg_rational("val-a", val_a)?,
            arg_rational("u", u)?,
        )?,
    };
    Ok(gen_output(&mp))
}
