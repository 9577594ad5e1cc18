mod reproduce;
mod report;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use stochgame::blackwell::{check_conditions_c, check_conditions_d, sc_ar_bne_discrete, CertificationError, ConditionSet};
use stochgame::continuous::{certify_bne_ct, sc_ar_bne_ct, uniformized_game, uniformized_tables, verify_nash_ct, mu_norm};
use stochgame::equilibrium::{
    best_response_mdp, enumerate_pure_nash, mixed_ne_single_controller_2x2, verify_average_nash, verify_nash,
};
use stochgame::game::{Game, GameTables, Player, PureStrategy, StationaryStrategy, TimeModel};
use stochgame::gamefile::{bundled_file, parse_strategy, GameFile};
use stochgame::mdp::optimal_policy;
use stochgame::numerics::{parse_rational, OrderedField, DEFAULT_TOLERANCE};
use stochgame::Rational;
use thiserror::Error;

use report::Render;

#[derive(Parser)]
#[command(name = "stochgame")]
#[command(about = "Analyse finite two-player stochastic games: values, Nash checks and Blackwell-Nash certificates")]
#[command(version)]
struct Cli {
    /// Indent JSON output; `reproduce-examples` prints a table instead
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Discount {
    /// Discount factor of a discrete game, e.g. 3/5 or 0.6
    #[arg(long, conflicts_with = "alpha")]
    beta: Option<String>,

    /// Discount rate of a continuous game, e.g. 1/2
    #[arg(long)]
    alpha: Option<String>,
}

#[derive(Args)]
struct Pair {
    /// Player 1 strategy: "p,q;r" with states separated by ';'
    #[arg(long)]
    f: String,

    /// Player 2 strategy, same syntax
    #[arg(long)]
    g: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum SetArg {
    C,
    D,
    M,
    N,
}

impl From<SetArg> for ConditionSet {
    fn from(s: SetArg) -> Self {
        match s {
            SetArg::C => ConditionSet::C,
            SetArg::D => ConditionSet::D,
            SetArg::M => ConditionSet::M,
            SetArg::N => ConditionSet::N,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Discounted values of a strategy pair for both players
    Value {
        /// Game file path or bundled example name
        game: String,
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        discount: Discount,
        /// Evaluate in floating point
        #[arg(long)]
        float: bool,
    },

    /// Optimal reply to a fixed opponent strategy
    BestResponse {
        game: String,
        /// Fixed player and strategy, e.g. "2:1,0;1"
        #[arg(long)]
        fix: String,
        #[command(flatten)]
        discount: Discount,
    },

    /// Check whether a pair is a Nash equilibrium
    VerifyNash {
        game: String,
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        discount: Discount,
        /// Use the limit-average criterion instead of discounting
        #[arg(long, conflicts_with_all = ["beta", "alpha"])]
        average: bool,
        /// Evaluate in floating point
        #[arg(long, conflicts_with = "average")]
        float: bool,
    },

    /// List every pure stationary Nash equilibrium
    EnumeratePure {
        game: String,
        #[command(flatten)]
        discount: Discount,
    },

    /// Check a sufficient-condition set for a pure pair and report its threshold
    Certify {
        game: String,
        #[command(flatten)]
        pair: Pair,
        #[arg(long, value_enum, ignore_case = true)]
        set: SetArg,
        /// Discount factor at which the pair is an equilibrium (C and D)
        #[arg(long, default_value = "0.6")]
        beta_hat: String,
        /// Discount rate at which the pair is an equilibrium (M and N)
        #[arg(long, default_value = "0.5")]
        alpha_hat: String,
    },

    /// Build a Blackwell-Nash pair of a single-controller additive-reward game
    ScAr { game: String },

    /// Completely mixed equilibrium of a game with one 2x2 state
    #[command(name = "mixed-ne-2x2")]
    MixedNe2x2 {
        game: String,
        #[command(flatten)]
        discount: Discount,
    },

    /// Recompute the bundled examples and compare with their known values
    ReproduceExamples,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Compute(String),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Input(_) => "input",
            CliError::Compute(_) => "computation",
        }
    }
}

fn input(e: impl ToString) -> CliError {
    CliError::Input(e.to_string())
}

fn compute(e: impl ToString) -> CliError {
    CliError::Compute(e.to_string())
}

/// A finished command: its report and whether the verdict was positive.
struct Outcome {
    report: Value,
    positive: bool,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Outcome { report, positive: true }
    }
}

struct Loaded {
    file: GameFile,
    game: Game,
}

impl Loaded {
    fn tables(&self) -> &GameTables {
        self.game.tables()
    }

    fn kind(&self) -> TimeModel {
        self.game.time_model()
    }

    fn echo(&self, source: &str) -> Value {
        json!({ "source": source, "name": self.file.name, "kind": self.kind() })
    }
}

fn load(source: &str) -> Result<Loaded, CliError> {
    let file = if Path::new(source).is_file() {
        let text = std::fs::read_to_string(source).map_err(|e| input(format!("{source}: {e}")))?;
        GameFile::from_json(&text).map_err(input)?
    } else {
        bundled_file(source).ok_or_else(|| input(format!("{source}: no such file or bundled example")))?
    };
    let game = file.to_game().map_err(input)?;
    Ok(Loaded { file, game })
}

fn rational(name: &str, text: &str) -> Result<Rational, CliError> {
    parse_rational(text).ok_or_else(|| input(format!("--{name}: {text:?} is not a number")))
}

fn tolerance() -> Result<f64, CliError> {
    match std::env::var("BNE_TOLERANCE") {
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(t) if t >= 0.0 && t.is_finite() => Ok(t),
            _ => Err(input(format!("BNE_TOLERANCE: {s:?} is not a nonnegative number"))),
        },
        Err(_) => Ok(DEFAULT_TOLERANCE),
    }
}

/// The discount parameter matching the game's time model.
enum Rate {
    Beta(Rational),
    Alpha(Rational),
}

impl Rate {
    fn echo(&self) -> Value {
        match self {
            Rate::Beta(b) => json!({ "beta": b.render() }),
            Rate::Alpha(a) => json!({ "alpha": a.render() }),
        }
    }
}

fn rate(loaded: &Loaded, d: &Discount) -> Result<Rate, CliError> {
    match (loaded.kind(), &d.beta, &d.alpha) {
        (TimeModel::Discrete, Some(b), None) => {
            let beta = rational("beta", b)?;
            if beta < Rational::from_integer(0.into()) || beta >= Rational::from_integer(1.into()) {
                return Err(input(format!("--beta must lie in [0, 1), got {b}")));
            }
            Ok(Rate::Beta(beta))
        }
        (TimeModel::Continuous, None, Some(a)) => {
            let alpha = rational("alpha", a)?;
            if alpha <= Rational::from_integer(0.into()) {
                return Err(input(format!("--alpha must be positive, got {a}")));
            }
            Ok(Rate::Alpha(alpha))
        }
        (TimeModel::Discrete, _, _) => Err(input("a discrete game needs --beta")),
        (TimeModel::Continuous, _, _) => Err(input("a continuous game needs --alpha")),
    }
}

fn strategy(game: &GameTables, player: Player, text: &str) -> Result<StationaryStrategy<Rational>, CliError> {
    let s = parse_strategy(text).map_err(input)?;
    s.validate(game, player, 0.0).map_err(input)?;
    Ok(s)
}

fn pure(game: &GameTables, player: Player, text: &str) -> Result<PureStrategy, CliError> {
    strategy(game, player, text)?
        .as_pure()
        .ok_or_else(|| input(format!("{player} strategy {text:?} is not pure")))
}

fn to_float(s: &StationaryStrategy<Rational>) -> StationaryStrategy<f64> {
    s.map(OrderedField::to_f64)
}

fn nash_report(
    loaded: &Loaded,
    f: &StationaryStrategy<Rational>,
    g: &StationaryStrategy<Rational>,
    rate: &Rate,
    float: bool,
) -> Result<(Value, bool), CliError> {
    let game = loaded.tables();
    let tol = tolerance()?;
    let out = match (rate, float) {
        (Rate::Beta(b), false) => {
            let r = verify_nash(game, f, g, b, 0.0).map_err(compute)?;
            (report::nash(&r), r.is_nash)
        }
        (Rate::Beta(b), true) => {
            let r = verify_nash(game, &to_float(f), &to_float(g), &b.to_f64(), tol).map_err(compute)?;
            (report::nash(&r), r.is_nash)
        }
        (Rate::Alpha(a), false) => {
            let r = verify_nash_ct(game, f, g, a, 0.0).map_err(compute)?;
            let mut v = report::nash(&r.report);
            v["beta"] = r.beta.render();
            v["norm"] = r.norm.render();
            (v, r.report.is_nash)
        }
        (Rate::Alpha(a), true) => {
            let r = verify_nash_ct(game, &to_float(f), &to_float(g), &a.to_f64(), tol).map_err(compute)?;
            let mut v = report::nash(&r.report);
            v["beta"] = r.beta.render();
            v["norm"] = r.norm.render();
            (v, r.report.is_nash)
        }
    };
    Ok(out)
}

fn value(loaded: &Loaded, pair: &Pair, d: &Discount, float: bool) -> Result<Outcome, CliError> {
    let game = loaded.tables();
    let f = strategy(game, Player::One, &pair.f)?;
    let g = strategy(game, Player::Two, &pair.g)?;
    let rate = rate(loaded, d)?;
    let (nash, _) = nash_report(loaded, &f, &g, &rate, float)?;
    Ok(Outcome::ok(json!({
        "inputs": { "f": pair.f, "g": pair.g, "discount": rate.echo(), "float": float },
        "values": nash["values"],
    })))
}

fn best_response(loaded: &Loaded, fix: &str, d: &Discount) -> Result<Outcome, CliError> {
    let (who, text) = fix
        .split_once(':')
        .ok_or_else(|| input(format!("--fix {fix:?}: expected \"player:strategy\"")))?;
    let fixed = match who.trim() {
        "1" => Player::One,
        "2" => Player::Two,
        other => return Err(input(format!("--fix: unknown player {other:?}"))),
    };
    let rate = rate(loaded, d)?;
    let (table, beta) = match &rate {
        Rate::Beta(b) => (loaded.tables().clone(), b.clone()),
        Rate::Alpha(a) => {
            let u = uniformized_game(loaded.tables(), a).map_err(compute)?;
            (u.tables, u.beta)
        }
    };
    let opponent = strategy(&table, fixed, text)?;
    let mdp = best_response_mdp(&table, &opponent, fixed.opponent()).map_err(compute)?;
    let best = optimal_policy(&mdp, &beta).map_err(compute)?;
    Ok(Outcome::ok(json!({
        "inputs": { "fix": fix, "discount": rate.echo() },
        "player": report::player(fixed.opponent()),
        "policy": report::pure(&best.policy),
        "value": report::list(&best.value),
        "optimal_actions": best.optimal_actions,
    })))
}

fn verify(loaded: &Loaded, pair: &Pair, d: &Discount, average: bool, float: bool) -> Result<Outcome, CliError> {
    let game = loaded.tables();
    let f = strategy(game, Player::One, &pair.f)?;
    let g = strategy(game, Player::Two, &pair.g)?;
    let (nash, is_nash, discount) = if average {
        let table = match loaded.kind() {
            TimeModel::Discrete => game.clone(),
            TimeModel::Continuous => uniformized_tables(game, &mu_norm(game).map_err(compute)?),
        };
        let r = verify_average_nash(&table, &f, &g, 0.0).map_err(compute)?;
        (report::nash(&r), r.is_nash, json!("average"))
    } else {
        let rate = rate(loaded, d)?;
        let (v, ok) = nash_report(loaded, &f, &g, &rate, float)?;
        (v, ok, rate.echo())
    };
    Ok(Outcome {
        report: json!({
            "inputs": { "f": pair.f, "g": pair.g, "discount": discount, "float": float },
            "nash": nash,
        }),
        positive: is_nash,
    })
}

fn enumerate(loaded: &Loaded, d: &Discount) -> Result<Outcome, CliError> {
    let rate = rate(loaded, d)?;
    let found = match &rate {
        Rate::Beta(b) => enumerate_pure_nash(loaded.tables(), b),
        Rate::Alpha(a) => {
            let u = uniformized_game(loaded.tables(), a).map_err(compute)?;
            enumerate_pure_nash(&u.tables, &u.beta)
        }
    }
    .map_err(compute)?;
    let pairs: Vec<Value> = found
        .iter()
        .map(|(f, g)| json!({ "f": report::pure(f), "g": report::pure(g) }))
        .collect();
    Ok(Outcome::ok(json!({
        "inputs": { "discount": rate.echo() },
        "count": pairs.len(),
        "equilibria": pairs,
    })))
}

fn certify(loaded: &Loaded, pair: &Pair, set: ConditionSet, beta_hat: &str, alpha_hat: &str) -> Result<Outcome, CliError> {
    let game = loaded.tables();
    let f = pure(game, Player::One, &pair.f)?;
    let g = pure(game, Player::Two, &pair.g)?;
    let (result, reference) = match (loaded.kind(), set) {
        (TimeModel::Discrete, ConditionSet::C | ConditionSet::D) => {
            let b = rational("beta-hat", beta_hat)?;
            let r = if set == ConditionSet::C {
                check_conditions_c(game, &f, &g, &b)
            } else {
                check_conditions_d(game, &f, &g, &b)
            };
            (r, json!({ "beta_hat": b.render() }))
        }
        (TimeModel::Continuous, ConditionSet::M | ConditionSet::N) => {
            let a = rational("alpha-hat", alpha_hat)?;
            (certify_bne_ct(game, &f, &g, &a, set), json!({ "alpha_hat": a.render() }))
        }
        (kind, _) => {
            let kind = if kind == TimeModel::Discrete { "discrete" } else { "continuous" };
            return Err(input(format!("condition set {set:?} does not apply to a {kind} game")));
        }
    };
    let inputs = json!({ "f": pair.f, "g": pair.g, "set": set, "reference": reference });
    match result {
        Ok(r) => Ok(Outcome {
            positive: r.certified,
            report: json!({ "inputs": inputs, "certificate": report::certification(&r) }),
        }),
        Err(CertificationError::InvalidCertificate { player, state, action, surplus }) => Ok(Outcome {
            positive: false,
            report: json!({
                "inputs": inputs,
                "certificate": null,
                "profitable_deviation": {
                    "player": report::player(player),
                    "state": state,
                    "action": action,
                    "surplus": surplus.render(),
                },
            }),
        }),
        Err(CertificationError::InvalidDiscount(msg)) => Err(input(msg)),
        Err(e) => Err(compute(e)),
    }
}

fn sc_ar(loaded: &Loaded) -> Result<Outcome, CliError> {
    let result = match loaded.kind() {
        TimeModel::Discrete => sc_ar_bne_discrete(loaded.tables()),
        TimeModel::Continuous => sc_ar_bne_ct(loaded.tables()),
    };
    match result {
        Ok(o) => Ok(Outcome::ok(json!({ "sc_ar": true, "equilibrium": report::sc_ar(&o) }))),
        Err(CertificationError::NotScAr(w)) => Ok(Outcome {
            positive: false,
            report: json!({ "sc_ar": false, "witness": report::sc_ar_witness(&w) }),
        }),
        Err(e) => Err(compute(e)),
    }
}

fn mixed(loaded: &Loaded, d: &Discount) -> Result<Outcome, CliError> {
    let rate = rate(loaded, d)?;
    let (table, beta) = match &rate {
        Rate::Beta(b) => (loaded.tables().clone(), b.clone()),
        Rate::Alpha(a) => {
            let u = uniformized_game(loaded.tables(), a).map_err(compute)?;
            (u.tables, u.beta)
        }
    };
    let sol = mixed_ne_single_controller_2x2(&table, &beta).map_err(compute)?;
    Ok(Outcome::ok(json!({
        "inputs": { "discount": rate.echo() },
        "state": sol.state,
        "p": sol.p.render(),
        "q": sol.q.render(),
        "f": report::strategy(&sol.f),
        "g": report::strategy(&sol.g),
    })))
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let with_game = |source: &str, name: &str, body: &dyn Fn(&Loaded) -> Result<Outcome, CliError>| {
        let loaded = load(source)?;
        let mut out = body(&loaded)?;
        let mut report = json!({ "command": name, "game": loaded.echo(source) });
        if let (Value::Object(dst), Value::Object(src)) = (&mut report, out.report) {
            dst.extend(src);
        }
        out.report = report;
        Ok(out)
    };
    match &cli.command {
        Command::Value { game, pair, discount, float } => {
            with_game(game, "value", &|l| value(l, pair, discount, *float))
        }
        Command::BestResponse { game, fix, discount } => {
            with_game(game, "best-response", &|l| best_response(l, fix, discount))
        }
        Command::VerifyNash { game, pair, discount, average, float } => {
            with_game(game, "verify-nash", &|l| verify(l, pair, discount, *average, *float))
        }
        Command::EnumeratePure { game, discount } => with_game(game, "enumerate-pure", &|l| enumerate(l, discount)),
        Command::Certify { game, pair, set, beta_hat, alpha_hat } => {
            with_game(game, "certify", &|l| certify(l, pair, (*set).into(), beta_hat, alpha_hat))
        }
        Command::ScAr { game } => with_game(game, "sc-ar", &|l| sc_ar(l)),
        Command::MixedNe2x2 { game, discount } => with_game(game, "mixed-ne-2x2", &|l| mixed(l, discount)),
        Command::ReproduceExamples => reproduce::run().map_err(compute),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = json!({ "error": { "kind": "usage", "message": e.to_string().trim_end() } });
            eprintln!("{err}");
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(out) => {
            let text = match (&cli.command, cli.pretty) {
                (Command::ReproduceExamples, true) => reproduce::table(&out.report),
                (_, true) => serde_json::to_string_pretty(&out.report).expect("reports serialize") + "\n",
                (_, false) => format!("{}\n", out.report),
            };
            let _ = std::io::stdout().write_all(text.as_bytes());
            if out.positive {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let err = json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
            eprintln!("{err}");
            ExitCode::from(2)
        }
    }
}
