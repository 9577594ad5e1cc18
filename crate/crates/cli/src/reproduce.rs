use serde_json::{json, Value};
use stochgame::blackwell::{check_conditions_d, sc_ar_bne_discrete, CertificationError, ConditionSet, RateThreshold, ScArWitness};
use stochgame::continuous::{certify_bne_ct, sc_ar_bne_ct, uniformized_game, verify_nash_ct};
use stochgame::equilibrium::{mixed_ne_single_controller_2x2, verify_average_nash, verify_nash};
use stochgame::game::{check_additive_reward, is_single_controller, GameTables, Player, PureStrategy, StationaryStrategy};
use stochgame::gamefile::bundled;
use stochgame::numerics::{format_rational, parse_rational};
use stochgame::Rational;

use super::Outcome;

struct Row {
    example: &'static str,
    quantity: String,
    expected: String,
    computed: String,
}

fn q(text: &str) -> Rational {
    parse_rational(text).expect("literal rational")
}

fn show(xs: &[Rational]) -> String {
    format!("({})", xs.iter().map(format_rational).collect::<Vec<_>>().join(", "))
}

fn tables(name: &str) -> GameTables {
    bundled(name).expect("bundled example").tables().clone()
}

fn pure(game: &GameTables, player: Player, actions: &[usize]) -> StationaryStrategy<Rational> {
    PureStrategy::new(actions.to_vec()).for_player(game, player)
}

fn split(x: Rational) -> StationaryStrategy<Rational> {
    StationaryStrategy::new(vec![vec![x.clone(), Rational::from_integer(1.into()) - x], vec![q("1")]])
}

fn rect(err: CertificationError) -> String {
    match err {
        CertificationError::NotScAr(ScArWitness::Rectangle(w)) => rectangle_sums(&w.values),
        other => format!("{other}"),
    }
}

fn rectangle_sums(v: &[Rational; 4]) -> String {
    format!(
        "{} + {} != {} + {}",
        format_rational(&v[0]),
        format_rational(&v[1]),
        format_rational(&v[2]),
        format_rational(&v[3])
    )
}

type PairValues<'a> =
    dyn Fn(&StationaryStrategy<Rational>, &StationaryStrategy<Rational>) -> Result<[Vec<Rational>; 2], String> + 'a;

/// Values for (f, g), (f', g), (f, g), (f, g') where the prime switches
/// the action at state 0, returned as player 1, 1, 2, 2.
fn flip_values(
    eval: &PairValues<'_>,
    game: &GameTables,
    f: &[usize],
    g: &[usize],
) -> Result<Vec<Vec<Rational>>, String> {
    let flip = |a: &[usize]| {
        let mut b = a.to_vec();
        b[0] = 1 - b[0];
        b
    };
    let fs = pure(game, Player::One, f);
    let gs = pure(game, Player::Two, g);
    let base = eval(&fs, &gs)?;
    let dev1 = eval(&pure(game, Player::One, &flip(f)), &gs)?;
    let dev2 = eval(&fs, &pure(game, Player::Two, &flip(g)))?;
    Ok(vec![base[0].clone(), dev1[0].clone(), base[1].clone(), dev2[1].clone()])
}

const PAIRS: [&str; 4] = ["v1(f, g)", "v1(f', g)", "v2(f, g)", "v2(f, g')"];

fn ex1_discrete(rows: &mut Vec<Row>) -> Result<(), String> {
    let game = tables("ex1-discrete");
    let w = check_additive_reward(&game, Player::One).err().ok_or("player 1 rewards decomposed")?;
    rows.push(row("ex1-discrete", "non-additivity witness", "4 + 4 != 6 + 5", rectangle_sums(&w.values)));
    for b in ["1/4", "1/2", "3/4", "9/10"] {
        let beta = q(b);
        let sol = mixed_ne_single_controller_2x2(&game, &beta).map_err(|e| e.to_string())?;
        let p = (q("3") * &beta + q("1")) / (q("7") + q("5") * &beta);
        rows.push(row("ex1-discrete", &format!("mixed p at beta = {b}"), &format_rational(&p), format_rational(&sol.p)));
        rows.push(row("ex1-discrete", &format!("mixed q at beta = {b}"), "2/3", format_rational(&sol.q)));
    }
    let avg = verify_average_nash(&game, &split(q("1/3")), &split(q("2/3")), 0.0).map_err(|e| e.to_string())?;
    rows.push(row("ex1-discrete", "average NE ((1/3,2/3),(2/3,1/3))", "true", avg.is_nash.to_string()));
    let err = sc_ar_bne_discrete(&game).err().ok_or("construction unexpectedly succeeded")?;
    rows.push(row("ex1-discrete", "sc-ar verdict", "4 + 4 != 6 + 5", rect(err)));
    Ok(())
}

fn ex_additive_check(rows: &mut Vec<Row>) -> Result<(), String> {
    let game = tables("ex-additive-check");
    rows.push(row("ex-additive-check", "controller", "Player2", format!("{:?}", is_single_controller(&game))));
    let out = sc_ar_bne_discrete(&game).map_err(|e| e.to_string())?;
    rows.push(row("ex-additive-check", "r1 at state 0", "(2, 1)", show(&out.decomposition.r1[0])));
    rows.push(row("ex-additive-check", "r2 at state 0", "(0, 3)", show(&out.decomposition.r2[0])));
    rows.push(row("ex-additive-check", "f* at state 0", "0", out.f.action(0).to_string()));
    let f = out.f.for_player::<Rational>(&game, Player::One);
    let g = out.g.for_player::<Rational>(&game, Player::Two);
    let holds = verify_nash(&game, &f, &g, &out.beta0, 0.0).map_err(|e| e.to_string())?.is_nash;
    rows.push(row("ex-additive-check", "Nash at beta0", "true", holds.to_string()));
    Ok(())
}

fn ex_sec_set(rows: &mut Vec<Row>) -> Result<(), String> {
    let game = tables("ex-sec-set");
    let beta = q("3/5");
    let eval = |f: &StationaryStrategy<Rational>, g: &StationaryStrategy<Rational>| {
        verify_nash(&game, f, g, &beta, 0.0).map(|r| r.values).map_err(|e| e.to_string())
    };
    let values = flip_values(&eval, &game, &[0, 0], &[0, 0])?;
    for ((name, expected), got) in PAIRS.iter().zip(["(10, 15/2)", "(19/2, 15/2)", "(11, 10)", "(11, 10)"]).zip(&values) {
        rows.push(row("ex-sec-set", &format!("{name} at beta = 3/5"), expected, show(got)));
    }
    let cert = check_conditions_d(&game, &PureStrategy::new(vec![0, 0]), &PureStrategy::new(vec![0, 0]), &beta)
        .map_err(|e| e.to_string())?;
    rows.push(row("ex-sec-set", "D certificate beta0", "3/5", opt(cert.beta0.as_ref())));
    let f = pure(&game, Player::One, &[0, 0]);
    let g = pure(&game, Player::Two, &[0, 0]);
    for b in ["3/5", "3/4", "9/10", "99/100"] {
        let ok = verify_nash(&game, &f, &g, &q(b), 0.0).map_err(|e| e.to_string())?.is_nash;
        rows.push(row("ex-sec-set", &format!("Nash at beta = {b}"), "true", ok.to_string()));
    }
    Ok(())
}

fn ct_ex1(rows: &mut Vec<Row>) -> Result<(), String> {
    let game = tables("ct-ex1");
    for a in ["1/4", "1", "4"] {
        let alpha = q(a);
        let p = (q("4") + &alpha) / (q("12") + q("7") * &alpha);
        let u = uniformized_game(&game, &alpha).map_err(|e| e.to_string())?;
        let sol = mixed_ne_single_controller_2x2(&u.tables, &u.beta).map_err(|e| e.to_string())?;
        rows.push(row("ct-ex1", &format!("mixed p at alpha = {a}"), &format_rational(&p), format_rational(&sol.p)));
        let ok = verify_nash_ct(&game, &split(p), &split(q("2/3")), &alpha, 0.0)
            .map_err(|e| e.to_string())?
            .report
            .is_nash;
        rows.push(row("ct-ex1", &format!("Nash at alpha = {a}"), "true", ok.to_string()));
    }
    let err = sc_ar_bne_ct(&game).err().ok_or("construction unexpectedly succeeded")?;
    rows.push(row("ct-ex1", "sc-ar verdict", "4 + 4 != 6 + 5", rect(err)));
    Ok(())
}

fn rate_example(
    rows: &mut Vec<Row>,
    name: &'static str,
    alpha: &str,
    beta: &str,
    g_star: [usize; 2],
    expected: [&str; 4],
    set: ConditionSet,
) -> Result<(), String> {
    let game = tables(name);
    let alpha_q = q(alpha);
    let u = uniformized_game(&game, &alpha_q).map_err(|e| e.to_string())?;
    rows.push(row(name, &format!("beta at alpha = {alpha}"), beta, format_rational(&u.beta)));
    let eval = |f: &StationaryStrategy<Rational>, g: &StationaryStrategy<Rational>| {
        verify_nash(&u.tables, f, g, &u.beta, 0.0).map(|r| r.values).map_err(|e| e.to_string())
    };
    let values = flip_values(&eval, &u.tables, &[0, 0], &g_star)?;
    for ((pair, exp), got) in PAIRS.iter().zip(expected).zip(&values) {
        rows.push(row(name, &format!("{pair} at alpha = {alpha}"), exp, show(got)));
    }
    let cert = certify_bne_ct(&game, &PureStrategy::new(vec![0, 0]), &PureStrategy::new(g_star.to_vec()), &alpha_q, set)
        .map_err(|e| e.to_string())?;
    let a0 = match cert.alpha0 {
        Some(RateThreshold::Finite(a)) => format_rational(&a),
        Some(RateThreshold::Unbounded) => "unbounded".into(),
        None => "not certified".into(),
    };
    rows.push(row(name, &format!("{set:?} certificate alpha0"), alpha, a0));
    Ok(())
}

fn opt(x: Option<&Rational>) -> String {
    x.map(format_rational).unwrap_or_else(|| "none".into())
}

fn row(example: &'static str, quantity: &str, expected: &str, computed: String) -> Row {
    Row {
        example,
        quantity: quantity.into(),
        expected: expected.into(),
        computed,
    }
}

pub fn run() -> Result<Outcome, String> {
    let mut rows = Vec::new();
    ex1_discrete(&mut rows)?;
    ex_additive_check(&mut rows)?;
    ex_sec_set(&mut rows)?;
    ct_ex1(&mut rows)?;
    rate_example(
        &mut rows,
        "ct-ex3",
        "1/2",
        "2/3",
        [1, 0],
        ["(8, 10)", "(8, 10)", "(22/3, 8)", "(6, 8)"],
        ConditionSet::M,
    )?;
    rate_example(
        &mut rows,
        "ct-ex2",
        "2/3",
        "3/5",
        [0, 0],
        ["(6, 9/2)", "(57/10, 9/2)", "(33/5, 6)", "(33/5, 6)"],
        ConditionSet::N,
    )?;
    let matched = rows.iter().filter(|r| r.expected == r.computed).count();
    let total = rows.len();
    let rows: Vec<Value> = rows
        .into_iter()
        .map(|r| {
            json!({
                "example": r.example,
                "quantity": r.quantity,
                "expected": r.expected,
                "computed": r.computed,
                "matches": r.expected == r.computed,
            })
        })
        .collect();
    Ok(Outcome {
        positive: matched == total,
        report: json!({
            "command": "reproduce-examples",
            "matched": matched,
            "total": total,
            "rows": rows,
        }),
    })
}

/// Aligned text rendering of a `run` report.
pub fn table(report: &Value) -> String {
    let rows = report["rows"].as_array().cloned().unwrap_or_default();
    let cells: Vec<[String; 5]> = rows
        .iter()
        .map(|r| {
            let s = |k: &str| r[k].as_str().unwrap_or_default().to_string();
            let mark = if r["matches"].as_bool() == Some(true) { "ok" } else { "MISMATCH" };
            [s("example"), s("quantity"), s("expected"), s("computed"), mark.to_string()]
        })
        .collect();
    let header = ["example", "quantity", "expected", "computed", ""].map(String::from);
    let mut width = [0usize; 5];
    for c in cells.iter().chain(std::iter::once(&header)) {
        for (w, x) in width.iter_mut().zip(c) {
            *w = (*w).max(x.chars().count());
        }
    }
    let line = |c: &[String; 5]| {
        let mut s = String::new();
        for (x, w) in c.iter().zip(width) {
            s.push_str(x);
            s.push_str(&" ".repeat(w - x.chars().count() + 2));
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(&header);
    for c in &cells {
        out.push_str(&line(c));
    }
    out.push_str(&format!("{} of {} rows match\n", report["matched"], report["total"]));
    out
}
