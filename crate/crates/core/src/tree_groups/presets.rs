use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::transducer::{Permutation, State, Transducer};
use crate::error::{Error, Result};

/// The five groups shipped with the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroupPreset {
    /// The group ⟨a, b, c, d⟩ of intermediate growth on the binary tree.
    G,
    /// Its relative with `c̃ = (1, d̃)`.
    Gtilde,
    /// Fabrykowski–Gupta group `⟨a, s⟩` on the ternary tree.
    Gamma,
    /// `⟨a, t⟩`, weakly branch.
    GammaBar,
    /// Gupta–Sidki group `⟨a, r⟩`.
    GammaBarBar,
}

/// One of the four symmetric generators of a preset, in Hecke-summand order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator(pub(crate) usize);

impl Generator {
    pub fn index(self) -> usize {
        self.0
    }
}

impl GroupPreset {
    pub const ALL: [GroupPreset; 5] = [
        Self::G,
        Self::Gtilde,
        Self::Gamma,
        Self::GammaBar,
        Self::GammaBarBar,
    ];

    pub fn alphabet_size(self) -> usize {
        match self {
            Self::G | Self::Gtilde => 2,
            _ => 3,
        }
    }

    pub fn is_binary(self) -> bool {
        self.alphabet_size() == 2
    }

    /// Command-line spelling.
    pub fn tag(self) -> &'static str {
        match self {
            Self::G => "g",
            Self::Gtilde => "gtilde",
            Self::Gamma => "gamma",
            Self::GammaBar => "gammabar",
            Self::GammaBarBar => "gammabarbar",
        }
    }

    pub fn generator_names(self) -> &'static [&'static str; 4] {
        match self {
            Self::G | Self::Gtilde => &["a", "b", "c", "d"],
            Self::Gamma => &["a", "a^-1", "s", "s^-1"],
            Self::GammaBar => &["a", "a^-1", "t", "t^-1"],
            Self::GammaBarBar => &["a", "a^-1", "r", "r^-1"],
        }
    }

    pub fn generators(self) -> [Generator; 4] {
        [Generator(0), Generator(1), Generator(2), Generator(3)]
    }

    pub fn generator_name(self, g: Generator) -> &'static str {
        self.generator_names()[g.0]
    }

    pub fn generator(self, name: &str) -> Result<Generator> {
        self.generator_names()
            .iter()
            .position(|&n| n == name)
            .map(Generator)
            .ok_or_else(|| Error::UnknownGenerator {
                group: self,
                name: name.to_string(),
            })
    }

    pub fn inverse(self, g: Generator) -> Generator {
        if self.is_binary() {
            g
        } else {
            Generator(g.0 ^ 1)
        }
    }

    /// Letter repeated along the ray whose stabilizers define the Schreier graphs.
    pub fn ray_letter(self) -> u8 {
        if self.is_binary() {
            1
        } else {
            2
        }
    }

    /// Full machine: one state per generator (same order as
    /// [`generator_names`](Self::generator_names)) followed by the identity
    /// state `e`. The initial state is `a`.
    pub fn machine(self) -> Transducer {
        let states = match self {
            Self::G | Self::Gtilde => {
                let (a, b, c, d, e) = (0, 1, 2, 3, 4);
                let id = Permutation::identity(2);
                let c_sections = if self == Self::G {
                    vec![a, d]
                } else {
                    vec![e, d]
                };
                vec![
                    State {
                        name: "a".into(),
                        output: Permutation::cycle(2, 1),
                        transitions: vec![e, e],
                    },
                    State {
                        name: "b".into(),
                        output: id.clone(),
                        transitions: vec![a, c],
                    },
                    State {
                        name: "c".into(),
                        output: id.clone(),
                        transitions: c_sections,
                    },
                    State {
                        name: "d".into(),
                        output: id.clone(),
                        transitions: vec![e, b],
                    },
                    State {
                        name: "e".into(),
                        output: id,
                        transitions: vec![e, e],
                    },
                ]
            }
            Self::Gamma | Self::GammaBar | Self::GammaBarBar => {
                let (a, a_inv, x, x_inv, e) = (0, 1, 2, 3, 4);
                let names = self.generator_names();
                // sections of the second generator on the subtrees 0 and 1
                let (s0, s1) = match self {
                    Self::Gamma => (a, e),
                    Self::GammaBar => (a, a),
                    _ => (a, a_inv),
                };
                let inv = |q: usize| match q {
                    q if q == a => a_inv,
                    q if q == a_inv => a,
                    q => q,
                };
                let id = Permutation::identity(3);
                vec![
                    State {
                        name: names[0].into(),
                        output: Permutation::cycle(3, 1),
                        transitions: vec![e; 3],
                    },
                    State {
                        name: names[1].into(),
                        output: Permutation::cycle(3, 2),
                        transitions: vec![e; 3],
                    },
                    State {
                        name: names[2].into(),
                        output: id.clone(),
                        transitions: vec![s0, s1, x],
                    },
                    State {
                        name: names[3].into(),
                        output: id.clone(),
                        transitions: vec![inv(s0), inv(s1), x_inv],
                    },
                    State {
                        name: "e".into(),
                        output: id,
                        transitions: vec![e; 3],
                    },
                ]
            }
        };
        Transducer::new(self.alphabet_size(), states, 0).expect("preset machines are well formed")
    }
}

impl fmt::Display for GroupPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for GroupPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        Self::ALL
            .into_iter()
            .find(|p| p.tag() == lower)
            .ok_or_else(|| Error::UnknownGroup(s.to_string()))
    }
}

/// Parses a word over a preset's generators. Lower-case letters are
/// generators; an upper-case letter or a `^-1` suffix denotes the inverse.
pub fn parse_generator_word(preset: GroupPreset, s: &str) -> Result<Vec<Generator>> {
    let mut out = Vec::new();
    let mut chars = s
        .chars()
        .filter(|c| !c.is_whitespace() && *c != '*' && *c != '.')
        .peekable();
    while let Some(c) = chars.next() {
        let lower = c.to_ascii_lowercase().to_string();
        let mut g = preset.generator(&lower)?;
        if c.is_ascii_uppercase() {
            g = preset.inverse(g);
        }
        if chars.peek() == Some(&'^') {
            let suffix: String = chars.by_ref().take(3).collect();
            if suffix != "^-1" {
                return Err(Error::InvalidInput(format!(
                    "bad exponent `{suffix}` in `{s}`"
                )));
            }
            g = preset.inverse(g);
        }
        out.push(g);
    }
    Ok(out)
}
