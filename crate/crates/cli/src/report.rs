use serde_json::{json, Map, Value};
use stochgame::blackwell::{Bound, BoundEntry, CertificationReport, RateThreshold, ScArOutcome, ScArWitness, VerdictWitness};
use stochgame::equilibrium::{Deviation, NashReport};
use stochgame::game::{Player, PureStrategy, RectangleWitness, StationaryStrategy};
use stochgame::numerics::{format_rational, OrderedField};
use stochgame::Rational;

/// A scalar as it appears in reports.
pub trait Render {
    fn render(&self) -> Value;
}

impl Render for Rational {
    fn render(&self) -> Value {
        json!({ "exact": format_rational(self), "decimal": OrderedField::to_f64(self) })
    }
}

impl Render for f64 {
    fn render(&self) -> Value {
        json!({ "decimal": self })
    }
}

pub fn list<T: Render>(xs: &[T]) -> Value {
    Value::Array(xs.iter().map(Render::render).collect())
}

pub fn per_player<T: Render>(xs: &[Vec<T>; 2]) -> Value {
    json!({ "p1": list(&xs[0]), "p2": list(&xs[1]) })
}

pub fn player(p: Player) -> Value {
    json!(p.index() + 1)
}

pub fn pure(p: &PureStrategy) -> Value {
    json!(p.actions())
}

/// `"p,q;r"`, the syntax accepted on the command line.
pub fn strategy(f: &StationaryStrategy<Rational>) -> String {
    f.rows()
        .iter()
        .map(|row| row.iter().map(format_rational).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join(";")
}

pub fn deviation<T: Render>(d: &Deviation<T>) -> Value {
    json!({
        "player": player(d.player),
        "state": d.state,
        "action": d.action,
        "gain": d.gain.render(),
    })
}

pub fn nash<T: Render>(r: &NashReport<T>) -> Value {
    json!({
        "is_nash": r.is_nash,
        "values": per_player(&r.values),
        "gaps": per_player(&r.gaps),
        "support_residuals": per_player(&r.support_residuals),
        "witness": r.witness.as_ref().map(deviation),
    })
}

pub fn rate(t: &RateThreshold) -> Value {
    match t {
        RateThreshold::Finite(a) => a.render(),
        RateThreshold::Unbounded => json!("unbounded"),
    }
}

fn bound(b: &Bound) -> Value {
    match b {
        Bound::Threshold(x) => json!({ "kind": "threshold", "value": x.render() }),
        Bound::BetaIndependent => json!({ "kind": "beta_independent" }),
        Bound::Undefined => json!({ "kind": "undefined" }),
        Bound::Reversed(x) => json!({ "kind": "reversed", "value": x.render() }),
        Bound::AlwaysProfitable => json!({ "kind": "always_profitable" }),
    }
}

fn bound_entry(e: &BoundEntry) -> Value {
    json!({
        "player": player(e.player),
        "state": e.state,
        "action": e.action,
        "numerator": e.numerator.render(),
        "denominator": e.denominator.render(),
        "bound": bound(&e.bound),
    })
}

fn verdict_witness(w: &VerdictWitness) -> Value {
    match w {
        VerdictWitness::Deviation(d) => json!({ "kind": "deviation", "deviation": deviation(d) }),
        VerdictWitness::Inequality { player: p, state, action, slack } => json!({
            "kind": "inequality",
            "player": player(*p),
            "state": state,
            "action": action,
            "slack": slack.render(),
        }),
        VerdictWitness::Row { state } => json!({ "kind": "row", "state": state }),
    }
}

pub fn certification(r: &CertificationReport) -> Value {
    let verdicts: Vec<Value> = r
        .verdicts
        .iter()
        .map(|v| {
            json!({
                "condition": v.condition,
                "holds": v.holds,
                "detail": v.detail,
                "witness": v.witness.as_ref().map(verdict_witness),
            })
        })
        .collect();
    json!({
        "condition_set": r.condition_set,
        "f": pure(&r.f),
        "g": pure(&r.g),
        "reference": r.reference.render(),
        "certified": r.certified,
        "verdicts": verdicts,
        "bounds": r.bounds.iter().map(bound_entry).collect::<Vec<_>>(),
        "chain": r.chain,
        "beta0": r.beta0.as_ref().map(Render::render),
        "player_beta0": r.player_beta0.as_ref().map(|b| json!({ "p1": b[0].render(), "p2": b[1].render() })),
        "alpha0": r.alpha0.as_ref().map(rate),
        "player_alpha0": r.player_alpha0.as_ref().map(|a| json!({ "p1": rate(&a[0]), "p2": rate(&a[1]) })),
        "notes": r.notes,
    })
}

pub fn rectangle(w: &RectangleWitness) -> Value {
    json!({
        "state": w.state,
        "rows": [w.a1, w.b1],
        "columns": [w.a2, w.b2],
        "values": list(&w.values),
        "diagonal_sum": w.diagonal_sum().render(),
        "anti_diagonal_sum": w.anti_diagonal_sum().render(),
    })
}

pub fn sc_ar_witness(w: &ScArWitness) -> Value {
    let mut out = Map::new();
    out.insert("message".into(), json!(w.to_string()));
    match w {
        ScArWitness::Controller(c) => {
            out.insert("kind".into(), json!("controller"));
            out.insert("controller".into(), json!(c));
        }
        ScArWitness::Rectangle(r) => {
            out.insert("kind".into(), json!("rectangle"));
            out.insert("rectangle".into(), rectangle(r));
        }
    }
    Value::Object(out)
}

pub fn sc_ar(o: &ScArOutcome) -> Value {
    let table = |rows: &[Vec<Rational>]| Value::Array(rows.iter().map(|r| list(r)).collect());
    json!({
        "f": pure(&o.f),
        "g": pure(&o.g),
        "controller": o.controller,
        "decomposition": { "r1": table(&o.decomposition.r1), "r2": table(&o.decomposition.r2) },
        "blackwell_threshold": o.blackwell.certificate.threshold.render(),
        "beta0": o.beta0.render(),
        "beta0_exact": o.beta0_exact,
        "norm": o.norm.as_ref().map(Render::render),
        "alpha0": o.alpha0.as_ref().map(rate),
        "notes": o.notes,
    })
}
