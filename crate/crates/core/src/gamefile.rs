//! JSON game files with exact numbers, and the bundled example games.

use std::fmt;

use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::game::{
    ContinuousGame, DiscreteGame, Game, GameError, GameTables, StateTable, StationaryStrategy, TimeModel,
};
use crate::numerics::{format_rational, parse_rational, Rational};

/// A number read exactly from an integer, a finite decimal, or a `"n/d"`
/// string. Integers serialize as JSON integers, everything else as `"n/d"`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exact(pub Rational);

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match (self.0.is_integer(), self.0.to_integer().to_i64()) {
            (true, Some(n)) => serializer.serialize_i64(n),
            _ => serializer.serialize_str(&format_rational(&self.0)),
        }
    }
}

struct ExactVisitor;

impl Visitor<'_> for ExactVisitor {
    type Value = Exact;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer, a finite decimal, or a \"num/den\" string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Exact, E> {
        Ok(Exact(Rational::from_integer(v.into())))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Exact, E> {
        Ok(Exact(Rational::from_integer(v.into())))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Exact, E> {
        if !v.is_finite() {
            return Err(E::custom("non-finite number"));
        }
        parse_rational(&v.to_string())
            .map(Exact)
            .ok_or_else(|| E::custom(format!("cannot read {v} exactly")))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Exact, E> {
        parse_rational(v)
            .map(Exact)
            .ok_or_else(|| E::custom(format!("not an exact number: {v:?}")))
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        deserializer.deserialize_any(ExactVisitor)
    }
}

type Table3 = Vec<Vec<Vec<Exact>>>;
type Table4 = Vec<Vec<Vec<Vec<Exact>>>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RewardFile {
    pub p1: Table3,
    pub p2: Table3,
}

/// On-disk form of a game.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub kind: TimeModel,
    pub states: usize,
    /// `[|A¹(s)|, |A²(s)|]` per state.
    pub actions: Vec<[usize; 2]>,
    pub rewards: RewardFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transitions: Option<Table4>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rates: Option<Table4>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GameFileError {
    #[error("malformed game file: {0}")]
    Json(String),
    #[error("game file shape: {0}")]
    Shape(String),
    #[error(transparent)]
    Game(#[from] GameError),
}

fn exact_vec(v: &[Exact]) -> Vec<Rational> {
    v.iter().map(|x| x.0.clone()).collect()
}

fn wrap_vec(v: &[Rational]) -> Vec<Exact> {
    v.iter().cloned().map(Exact).collect()
}

impl GameFile {
    pub fn from_json(text: &str) -> Result<GameFile, GameFileError> {
        serde_json::from_str(text).map_err(|e| GameFileError::Json(e.to_string()))
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("game files always serialize")
    }

    /// Raw tables, checked against the declared counts but not validated.
    pub fn tables(&self) -> Result<GameTables, GameFileError> {
        let shape = |msg: String| Err(GameFileError::Shape(msg));
        let (law, field, other) = match self.kind {
            TimeModel::Discrete => (&self.transitions, "transitions", &self.rates),
            TimeModel::Continuous => (&self.rates, "rates", &self.transitions),
        };
        if other.is_some() {
            return shape(format!("a {:?} game must not carry the other law field", self.kind).to_lowercase());
        }
        let Some(law) = law else {
            return shape(format!("missing \"{field}\""));
        };
        let n = self.states;
        if self.actions.len() != n {
            return shape(format!("\"actions\" lists {} states, expected {n}", self.actions.len()));
        }
        for (name, len) in [("rewards.p1", self.rewards.p1.len()), ("rewards.p2", self.rewards.p2.len()), (field, law.len())] {
            if len != n {
                return shape(format!("\"{name}\" lists {len} states, expected {n}"));
            }
        }
        let mut states = Vec::with_capacity(n);
        for s in 0..n {
            let [n1, n2] = self.actions[s];
            let check_grid = |name: &str, rows: usize, cols: &[usize]| -> Result<(), GameFileError> {
                if rows != n1 || cols.iter().any(|&c| c != n2) {
                    return Err(GameFileError::Shape(format!(
                        "\"{name}\" at state {s} is not {n1}x{n2}"
                    )));
                }
                Ok(())
            };
            let p1 = &self.rewards.p1[s];
            let p2 = &self.rewards.p2[s];
            let l = &law[s];
            check_grid("rewards.p1", p1.len(), &p1.iter().map(Vec::len).collect::<Vec<_>>())?;
            check_grid("rewards.p2", p2.len(), &p2.iter().map(Vec::len).collect::<Vec<_>>())?;
            check_grid(field, l.len(), &l.iter().map(Vec::len).collect::<Vec<_>>())?;
            if let Some(bad) = l.iter().flatten().find(|row| row.len() != n) {
                return shape(format!("\"{field}\" row at state {s} has {} entries, expected {n}", bad.len()));
            }
            states.push(StateTable {
                rewards: [
                    p1.iter().map(|r| exact_vec(r)).collect(),
                    p2.iter().map(|r| exact_vec(r)).collect(),
                ],
                law: l.iter().map(|r| r.iter().map(|c| exact_vec(c)).collect()).collect(),
            });
        }
        Ok(GameTables { states })
    }

    pub fn to_game(&self) -> Result<Game, GameFileError> {
        let tables = self.tables()?;
        Ok(match self.kind {
            TimeModel::Discrete => Game::Discrete(DiscreteGame::new(tables)?),
            TimeModel::Continuous => Game::Continuous(ContinuousGame::new(tables)?),
        })
    }

    pub fn from_tables(kind: TimeModel, tables: &GameTables) -> GameFile {
        let grid = |t: &Vec<Vec<Rational>>| -> Vec<Vec<Exact>> { t.iter().map(|r| wrap_vec(r)).collect() };
        let law: Table4 = tables
            .states
            .iter()
            .map(|st| st.law.iter().map(|r| r.iter().map(|c| wrap_vec(c)).collect()).collect())
            .collect();
        GameFile {
            name: None,
            description: None,
            kind,
            states: tables.state_count(),
            actions: tables.states.iter().map(|st| st.action_counts()).collect(),
            rewards: RewardFile {
                p1: tables.states.iter().map(|st| grid(&st.rewards[0])).collect(),
                p2: tables.states.iter().map(|st| grid(&st.rewards[1])).collect(),
            },
            transitions: (kind == TimeModel::Discrete).then(|| law.clone()),
            rates: (kind == TimeModel::Continuous).then_some(law),
        }
    }

    pub fn from_game(game: &Game) -> GameFile {
        GameFile::from_tables(game.time_model(), game.tables())
    }
}

/// Parses and validates a game file.
pub fn load_game(text: &str) -> Result<Game, GameFileError> {
    GameFile::from_json(text)?.to_game()
}

/// Parses `"p,q;r"`: states separated by `;`, action probabilities by `,`,
/// each an exact number.
pub fn parse_strategy(text: &str) -> Result<StationaryStrategy<Rational>, GameFileError> {
    let rows = text
        .split(';')
        .enumerate()
        .map(|(s, row)| {
            row.split(',')
                .map(|x| {
                    parse_rational(x).ok_or_else(|| {
                        GameFileError::Shape(format!("strategy entry {:?} at state {s} is not a number", x.trim()))
                    })
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(StationaryStrategy::new(rows))
}

/// Example games shipped with the library, by name.
pub const BUNDLED: &[(&str, &str)] = &[
    ("ex1-discrete", include_str!("../games/ex1-discrete.json")),
    ("ex-additive-check", include_str!("../games/ex-additive-check.json")),
    ("ex-sec-set", include_str!("../games/ex-sec-set.json")),
    ("ct-ex1", include_str!("../games/ct-ex1.json")),
    ("ct-ex3", include_str!("../games/ct-ex3.json")),
    ("ct-ex2", include_str!("../games/ct-ex2.json")),
];

/// The bundled game file called `name`; a trailing `.json` is ignored.
pub fn bundled_file(name: &str) -> Option<GameFile> {
    let key = name.strip_suffix(".json").unwrap_or(name);
    BUNDLED
        .iter()
        .find(|(n, _)| *n == key)
        .map(|(_, text)| GameFile::from_json(text).expect("bundled games parse"))
}

pub fn bundled(name: &str) -> Option<Game> {
    bundled_file(name).map(|f| f.to_game().expect("bundled games validate"))
}
