//! JSON encodings of the rational types.
//!
//! Rationals are strings `"n"` or `"n/d"` (bare JSON integers are accepted on
//! input); counts are JSON integers. Decoding errors carry a JSON pointer to
//! the offending value.

use std::fmt;

use serde_json::{json, Map, Value};

use crate::scalar::Scalar;

use crate::connection::ConvergencePolygon;
use crate::pushforward::{BoundReport, PhiRow};
use crate::{
    parse_rational, AnnulusDirection, DirectionModel, EquationProfile, FiberConfiguration,
    FiberPoint, MorphismProfile, MultiRadius, NData, PhiTable, ProfileFamily, Pwm,
    RamificationData, Rational, SeriesValuations,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodecError {
    pub pointer: String,
    pub message: String,
}

impl fmt::Display for CodecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = if self.pointer.is_empty() {
            "/"
        } else {
            &self.pointer
        };
        write!(f, "at {at}: {}", self.message)
    }
}

impl std::error::Error for CodecError {}

pub type CodecResult<T> = std::result::Result<T, CodecError>;

pub fn fail<T>(pointer: &str, message: impl Into<String>) -> CodecResult<T> {
    Err(CodecError {
        pointer: pointer.to_string(),
        message: message.into(),
    })
}

pub fn child(pointer: &str, key: impl fmt::Display) -> String {
    let key = key.to_string().replace('~', "~0").replace('/', "~1");
    format!("{pointer}/{key}")
}

pub fn lift<T>(pointer: &str, r: crate::Result<T>) -> CodecResult<T> {
    r.or_else(|e| fail(pointer, e.to_string()))
}

pub fn object<'a>(v: &'a Value, ptr: &str) -> CodecResult<&'a Map<String, Value>> {
    v.as_object()
        .map_or_else(|| fail(ptr, "expected an object"), Ok)
}

pub fn field<'a>(
    obj: &'a Map<String, Value>,
    ptr: &str,
    key: &str,
) -> CodecResult<(&'a Value, String)> {
    match obj.get(key) {
        Some(v) => Ok((v, child(ptr, key))),
        None => fail(ptr, format!("missing field {key:?}")),
    }
}

pub fn array<'a>(v: &'a Value, ptr: &str) -> CodecResult<&'a Vec<Value>> {
    v.as_array()
        .map_or_else(|| fail(ptr, "expected an array"), Ok)
}

pub fn list<T>(
    v: &Value,
    ptr: &str,
    item: impl Fn(&Value, &str) -> CodecResult<T>,
) -> CodecResult<Vec<T>> {
    array(v, ptr)?
        .iter()
        .enumerate()
        .map(|(i, x)| item(x, &child(ptr, i)))
        .collect()
}

pub fn pair<'a>(v: &'a Value, ptr: &str) -> CodecResult<(&'a Value, &'a Value)> {
    match array(v, ptr)?.as_slice() {
        [a, b] => Ok((a, b)),
        _ => fail(ptr, "expected a pair"),
    }
}

pub fn rational(v: &Value, ptr: &str) -> CodecResult<Rational> {
    match v {
        Value::String(s) => lift(ptr, parse_rational(s)),
        Value::Number(n) if n.is_i64() => Ok(crate::q(n.as_i64().unwrap(), 1)),
        _ => fail(ptr, "expected a rational string like \"3/2\""),
    }
}

pub fn uint(v: &Value, ptr: &str) -> CodecResult<u64> {
    v.as_u64()
        .map_or_else(|| fail(ptr, "expected a nonnegative integer"), Ok)
}

pub fn int(v: &Value, ptr: &str) -> CodecResult<i64> {
    v.as_i64()
        .map_or_else(|| fail(ptr, "expected an integer"), Ok)
}

pub fn boolean(v: &Value, ptr: &str) -> CodecResult<bool> {
    v.as_bool()
        .map_or_else(|| fail(ptr, "expected a boolean"), Ok)
}

/// Reads inputs. With a base `p`, radius literals (multiradius entries and
/// fiber radii) are radii `p^{-k}` rather than log-values.
#[derive(Clone, Copy, Debug, Default)]
pub struct Decoder {
    base: Option<u64>,
}

impl Decoder {
    pub fn new() -> Self {
        Decoder { base: None }
    }

    pub fn with_base(base: Option<u64>) -> Self {
        Decoder { base }
    }

    fn radius(&self, v: &Value, ptr: &str) -> CodecResult<Rational> {
        let x = rational(v, ptr)?;
        match self.base {
            None => Ok(x),
            Some(p) => radius_to_log(&x, p).map_or_else(
                || fail(ptr, format!("radius {x} is not a power p^-k of p = {p}")),
                Ok,
            ),
        }
    }

    pub fn pwm(&self, v: &Value, ptr: &str) -> CodecResult<Pwm> {
        let obj = object(v, ptr)?;
        let (b, bp) = field(obj, ptr, "breaks")?;
        let (s, sp) = field(obj, ptr, "slopes")?;
        let breaks = list(b, &bp, rational)?;
        let slopes = list(s, &sp, rational)?;
        lift(ptr, Pwm::new(breaks, slopes))
    }

    /// A PWM object with an optional `"etale"` flag, default `true`.
    pub fn profile(&self, v: &Value, ptr: &str) -> CodecResult<MorphismProfile> {
        let pwm = self.pwm(v, ptr)?;
        let etale = match object(v, ptr)?.get("etale") {
            Some(e) => boolean(e, &child(ptr, "etale"))?,
            None => true,
        };
        lift(ptr, MorphismProfile::new(pwm, etale))
    }

    pub fn equation_profile(&self, v: &Value, ptr: &str) -> CodecResult<EquationProfile> {
        let pwm = self.pwm(v, ptr)?;
        lift(ptr, EquationProfile::new(pwm))
    }

    pub fn series(&self, v: &Value, ptr: &str) -> CodecResult<SeriesValuations> {
        let (t, tp) = field(object(v, ptr)?, ptr, "terms")?;
        let terms = list(t, &tp, |x, p| {
            let (i, val) = pair(x, p)?;
            let i = uint(i, &child(p, 0))?;
            let i = u32::try_from(i).or_else(|_| fail(&child(p, 0), "index too large"))?;
            Ok((i, rational(val, &child(p, 1))?))
        })?;
        lift(ptr, SeriesValuations::new(terms))
    }

    fn radius_list(&self, v: &Value, ptr: &str) -> CodecResult<MultiRadius> {
        let vs = list(v, ptr, |x, p| self.radius(x, p))?;
        lift(ptr, MultiRadius::from_multiset(vs))
    }

    pub fn multiradius(&self, v: &Value, ptr: &str) -> CodecResult<MultiRadius> {
        let (l, lp) = field(object(v, ptr)?, ptr, "logvalues")?;
        self.radius_list(l, &lp)
    }

    pub fn fiber_point(&self, v: &Value, ptr: &str) -> CodecResult<FiberPoint> {
        let obj = object(v, ptr)?;
        let label = match obj.get("label") {
            Some(Value::String(s)) => s.clone(),
            Some(_) => return fail(&child(ptr, "label"), "expected a string"),
            None => String::new(),
        };
        let (s, sp) = field(obj, ptr, "sep_degree")?;
        let sep = uint(s, &sp)?;
        let (p, pp) = field(obj, ptr, "profile")?;
        let profile = self.profile(p, &pp)?;
        let (r, rp) = field(obj, ptr, "radii")?;
        let radii = self.radius_list(r, &rp)?;
        lift(ptr, FiberPoint::new(label, profile, sep, radii))
    }

    pub fn fiber(&self, v: &Value, ptr: &str) -> CodecResult<FiberConfiguration> {
        let obj = object(v, ptr)?;
        let (r, rp) = field(obj, ptr, "rank")?;
        let rank = uint(r, &rp)? as usize;
        let (p, pp) = field(obj, ptr, "points")?;
        let points = list(p, &pp, |x, q| self.fiber_point(x, q))?;
        lift(ptr, FiberConfiguration::new(rank, points))
    }

    pub fn direction_model(&self, v: &Value, ptr: &str) -> CodecResult<DirectionModel> {
        let (c, cp) = field(object(v, ptr)?, ptr, "components")?;
        let comps = list(c, &cp, |x, p| {
            let (a, m) = pair(x, p)?;
            Ok((rational(a, &child(p, 0))?, rational(m, &child(p, 1))?))
        })?;
        lift(ptr, DirectionModel::new(comps))
    }

    pub fn polygon(&self, v: &Value, ptr: &str) -> CodecResult<ConvergencePolygon<Rational>> {
        let (vs, vp) = field(object(v, ptr)?, ptr, "vertices")?;
        let vertices = list(vs, &vp, |x, p| {
            let (i, h) = pair(x, p)?;
            Ok((uint(i, &child(p, 0))?, rational(h, &child(p, 1))?))
        })?;
        let ok = vertices.first() == Some(&(0, crate::q(0, 1)))
            && vertices
                .iter()
                .enumerate()
                .all(|(k, (i, _))| *i == k as u64);
        if !ok || vertices.len() < 2 {
            return fail(&vp, "vertices must be (0, 0), (1, h_1), ..., (r, h_r)");
        }
        let incs = vertices
            .windows(2)
            .map(|w| w[1].1.clone() - w[0].1.clone())
            .collect();
        let mr = lift(&vp, MultiRadius::new(incs))?;
        Ok(crate::polygon(&mr))
    }

    pub fn profile_family(&self, v: &Value, ptr: &str) -> CodecResult<ProfileFamily> {
        let obj = object(v, ptr)?;
        let (iv, ip) = field(obj, ptr, "interval")?;
        let (lo, hi) = pair(iv, &ip)?;
        let lo = rational(lo, &child(&ip, 0))?;
        let hi = match hi {
            Value::String(s) if s == "inf" => None,
            Value::Null => None,
            other => Some(rational(other, &child(&ip, 1))?),
        };
        let (b, bp) = field(obj, ptr, "breaks")?;
        let breaks = list(b, &bp, |x, p| {
            let (beta, e) = pair(x, p)?;
            Ok((rational(beta, &child(p, 0))?, rational(e, &child(p, 1))?))
        })?;
        let (s, sp) = field(obj, ptr, "slopes")?;
        let slopes = list(s, &sp, rational)?;
        let etale = match obj.get("etale") {
            Some(e) => boolean(e, &child(ptr, "etale"))?,
            None => true,
        };
        lift(ptr, ProfileFamily::new(lo, hi, breaks, slopes, etale))
    }

    pub fn annulus_direction(&self, v: &Value, ptr: &str) -> CodecResult<AnnulusDirection> {
        let obj = object(v, ptr)?;
        let (d, dp) = field(obj, ptr, "d")?;
        let (s, sp) = field(obj, ptr, "sigma")?;
        let (a, ap) = field(obj, ptr, "val_a")?;
        let dir = AnnulusDirection::new(uint(d, &dp)?, int(s, &sp)?, rational(a, &ap)?);
        let dir = lift(ptr, dir)?;
        if let Some(nu) = obj.get("nu") {
            let np = child(ptr, "nu");
            if int(nu, &np)? != dir.nu() {
                return fail(&np, format!("nu must equal sigma - d + 1 = {}", dir.nu()));
            }
        }
        Ok(dir)
    }

    pub fn ramification(&self, v: &Value, ptr: &str) -> CodecResult<RamificationData> {
        let obj = object(v, ptr)?;
        let (d, dp) = field(obj, ptr, "degree")?;
        let (j, jp) = field(obj, ptr, "jumps")?;
        let jumps = list(j, &jp, |x, p| {
            let (v, i) = pair(x, p)?;
            Ok((rational(v, &child(p, 0))?, uint(i, &child(p, 1))?))
        })?;
        lift(ptr, RamificationData::new(uint(d, &dp)?, jumps))
    }

    /// Re-reads an emitted N-function; it is not validated against a profile.
    pub fn ndata_steps(&self, v: &Value, ptr: &str) -> CodecResult<Vec<(Rational, u64)>> {
        let (s, sp) = field(object(v, ptr)?, ptr, "steps")?;
        list(s, &sp, |x, p| {
            let (w, n) = pair(x, p)?;
            Ok((rational(w, &child(p, 0))?, uint(n, &child(p, 1))?))
        })
    }

    pub fn phi_table(&self, v: &Value, ptr: &str) -> CodecResult<PhiTable> {
        let (c, cp) = field(object(v, ptr)?, ptr, "candidates")?;
        let rows = list(c, &cp, |x, p| match array(x, p)?.as_slice() {
            [s, a, b] => Ok(PhiRow {
                s: rational(s, &child(p, 0))?,
                phi: uint(a, &child(p, 1))?,
                phi_plus: uint(b, &child(p, 2))?,
            }),
            _ => fail(p, "expected [s, phi, phi_plus]"),
        })?;
        Ok(PhiTable { rows })
    }
}

/// `-log_p r` when `r = p^{-k}` for an integer `k ≥ 0`.
pub fn radius_to_log(r: &Rational, p: u64) -> Option<Rational> {
    use num_bigint::BigInt;
    use num_traits::{One, Zero};
    if p < 2 || *r <= Rational::zero() || !r.numer().is_one() {
        return None;
    }
    let mut den = r.denom().clone();
    let pb = BigInt::from(p);
    let mut k = 0i64;
    while !den.is_one() {
        if !(den.clone() % &pb).is_zero() {
            return None;
        }
        den /= &pb;
        k += 1;
    }
    Some(crate::q(k, 1))
}

fn rstr(x: &Rational) -> Value {
    Value::String(x.to_string())
}

fn rlist<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> Value {
    Value::Array(xs.into_iter().map(rstr).collect())
}

/// Integral slopes as JSON integers, others as rational strings.
fn count_or_rational(x: &Rational) -> Value {
    match x.to_int() {
        Some(n) => json!(n),
        None => rstr(x),
    }
}

pub fn encode_pwm(p: &Pwm) -> Value {
    json!({ "breaks": rlist(p.breaks()), "slopes": rlist(p.slopes()) })
}

pub fn encode_profile(mp: &MorphismProfile) -> Value {
    let mut v = encode_pwm(mp.pwm());
    v["etale"] = Value::Bool(mp.is_etale());
    v
}

pub fn encode_equation_profile(ep: &EquationProfile) -> Value {
    encode_pwm(ep.pwm())
}

pub fn encode_series(s: &SeriesValuations) -> Value {
    let terms: Vec<Value> = s.terms().iter().map(|(i, v)| json!([i, rstr(v)])).collect();
    json!({ "terms": terms })
}

pub fn encode_multiradius(mr: &MultiRadius) -> Value {
    json!({ "logvalues": rlist(mr.logvalues()) })
}

pub fn encode_fiber(fc: &FiberConfiguration) -> Value {
    let points: Vec<Value> = fc
        .points()
        .iter()
        .map(|pt| {
            json!({
                "label": pt.label,
                "sep_degree": pt.sep_degree,
                "profile": encode_profile(&pt.profile),
                "radii": rlist(pt.radii.logvalues()),
            })
        })
        .collect();
    json!({ "rank": fc.rank(), "points": points })
}

pub fn encode_ndata(nd: &NData) -> Value {
    let steps: Vec<Value> = nd
        .steps()
        .iter()
        .map(|(s, n)| json!([rstr(s), n]))
        .collect();
    json!({ "steps": steps })
}

pub fn encode_polygon(p: &ConvergencePolygon<Rational>) -> Value {
    let vertices: Vec<Value> = p
        .vertices()
        .iter()
        .map(|(i, h)| json!([i, rstr(h)]))
        .collect();
    json!({ "vertices": vertices, "height": rstr(p.height()) })
}

pub fn encode_direction_model(dm: &DirectionModel) -> Value {
    let comps: Vec<Value> = dm
        .components()
        .iter()
        .map(|(c, m)| json!([rstr(c), count_or_rational(m)]))
        .collect();
    json!({ "components": comps })
}

pub fn encode_profile_family(pf: &ProfileFamily) -> Value {
    let (lo, hi) = pf.interval();
    let hi = hi.map_or(Value::String("inf".into()), rstr);
    let breaks: Vec<Value> = pf
        .breaks()
        .iter()
        .map(|(b, e)| json!([rstr(b), rstr(e)]))
        .collect();
    json!({
        "interval": [rstr(lo), hi],
        "breaks": breaks,
        "slopes": rlist(pf.slopes()),
        "etale": pf.is_etale(),
    })
}

pub fn encode_annulus_direction(dir: &AnnulusDirection) -> Value {
    json!({ "d": dir.d(), "sigma": dir.sigma(), "val_a": rstr(dir.val_a()), "nu": dir.nu() })
}

pub fn encode_ramification(rd: &RamificationData) -> Value {
    let jumps: Vec<Value> = rd
        .jumps()
        .iter()
        .map(|(v, i)| json!([rstr(v), i]))
        .collect();
    json!({ "degree": rd.degree(), "jumps": jumps })
}

pub fn encode_phi_table(t: &PhiTable) -> Value {
    let rows: Vec<Value> = t
        .rows
        .iter()
        .map(|r| json!([rstr(&r.s), r.phi, r.phi_plus]))
        .collect();
    json!({ "candidates": rows })
}

pub fn encode_bound_report(r: &BoundReport) -> Value {
    json!({
        "bound": r.bound,
        "satisfied": r.satisfied,
        "equality": r.equality,
        "equality_expected": r.equality_expected,
        "consistent": r.consistent,
        "note": r.note,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    #[test]
    fn pwm_round_trip() {
        let v = json!({"breaks": ["1/2", "1"], "slopes": ["4", "2", 1]});
        let p = Decoder::new().pwm(&v, "").unwrap();
        assert_eq!(Decoder::new().pwm(&encode_pwm(&p), "").unwrap(), p);
        assert_eq!(encode_pwm(&p)["slopes"], json!(["4", "2", "1"]));
    }

    #[test]
    fn errors_carry_pointers() {
        let v = json!({"rank": 1, "points": [{"sep_degree": 1,
            "profile": {"breaks": ["1"], "slopes": ["2", "x"]}, "radii": ["3"]}]});
        let e = Decoder::new().fiber(&v, "").unwrap_err();
        assert_eq!(e.pointer, "/points/0/profile/slopes/1");
        let v = json!({"rank": 1, "points": [{"sep_degree": 1,
            "profile": {"breaks": ["1"], "slopes": ["2", "1"]}}]});
        let e = Decoder::new().fiber(&v, "").unwrap_err();
        assert_eq!(e.pointer, "/points/0");
        assert!(e.message.contains("radii"));
    }

    #[test]
    fn domain_errors_point_at_the_object() {
        let v = json!({"breaks": ["1"], "slopes": ["1", "2"]});
        let e = Decoder::new().profile(&v, "/profile").unwrap_err();
        assert_eq!(e.pointer, "/profile");
    }

    #[test]
    fn base_converts_radius_literals() {
        let dec = Decoder::with_base(Some(2));
        let mr = dec
            .multiradius(&json!({"logvalues": ["1/4", "1", "1/8"]}), "")
            .unwrap();
        assert_eq!(mr.logvalues(), &[q(3, 1), q(2, 1), q(0, 1)]);
        let e = dec
            .multiradius(&json!({"logvalues": ["1/3"]}), "")
            .unwrap_err();
        assert_eq!(e.pointer, "/logvalues/0");
        assert_eq!(radius_to_log(&q(1, 9), 3), Some(q(2, 1)));
        assert_eq!(radius_to_log(&q(2, 9), 3), None);
        assert_eq!(radius_to_log(&q(3, 1), 3), None);
    }

    #[test]
    fn fiber_round_trip() {
        let v = json!({"rank": 2, "points": [
            {"label": "a", "sep_degree": 2, "profile": {"breaks": ["1"], "slopes": ["2", "1"]},
             "radii": ["3", "1/2"]},
            {"label": "b/c", "sep_degree": 1, "profile": {"breaks": [], "slopes": ["1"]},
             "radii": ["0", "0"]}]});
        let fc = Decoder::new().fiber(&v, "").unwrap();
        assert_eq!(fc.degree(), 5);
        assert_eq!(Decoder::new().fiber(&encode_fiber(&fc), "").unwrap(), fc);
    }

    #[test]
    fn other_round_trips() {
        let dec = Decoder::new();
        let pf = dec
            .profile_family(
                &json!({"interval": ["0", "inf"], "breaks": [["1/2", 1]], "slopes": ["2", "1"]}),
                "",
            )
            .unwrap();
        assert_eq!(
            dec.profile_family(&encode_profile_family(&pf), "").unwrap(),
            pf
        );
        let rd = dec
            .ramification(&json!({"degree": 4, "jumps": [["1", 1], ["3", 2]]}), "")
            .unwrap();
        assert_eq!(dec.ramification(&encode_ramification(&rd), "").unwrap(), rd);
        let dir = dec
            .annulus_direction(&json!({"d": 2, "sigma": 1, "val_a": "1"}), "")
            .unwrap();
        assert_eq!(dir.nu(), 0);
        assert_eq!(
            dec.annulus_direction(&encode_annulus_direction(&dir), "")
                .unwrap(),
            dir
        );
        let bad_nu = json!({"d": 2, "sigma": 1, "val_a": "1", "nu": 1});
        assert_eq!(
            dec.annulus_direction(&bad_nu, "").unwrap_err().pointer,
            "/nu"
        );
        let dm = dec
            .direction_model(&json!({"components": [["0", 1], ["2", 0]]}), "")
            .unwrap();
        assert_eq!(
            dec.direction_model(&encode_direction_model(&dm), "")
                .unwrap(),
            dm
        );
        let poly = crate::polygon(&MultiRadius::new(vec![q(4, 1), q(4, 1)]).unwrap());
        assert_eq!(dec.polygon(&encode_polygon(&poly), "").unwrap(), poly);
        let s = dec
            .series(&json!({"terms": [[2, "0"], [1, "1"]]}), "")
            .unwrap();
        assert_eq!(dec.series(&encode_series(&s), "").unwrap(), s);
    }
}
