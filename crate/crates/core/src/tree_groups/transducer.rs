use std::fmt;

use crate::error::{Error, Result};

/// A word over the alphabet `{0, .., d-1}`, i.e. a vertex of the rooted tree.
///
/// The empty word is the root.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeWord(Vec<u8>);

impl TreeWord {
    pub fn new(letters: Vec<u8>) -> Self {
        Self(letters)
    }

    pub fn root() -> Self {
        Self(Vec::new())
    }

    /// Parses a string of decimal digits such as `"0210"`.
    pub fn parse(s: &str, alphabet: usize) -> Result<Self> {
        let letters = s
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .filter(|&v| (v as usize) < alphabet)
                    .map(|v| v as u8)
                    .ok_or_else(|| {
                        Error::InvalidInput(format!(
                            "letter `{c}` not in alphabet of size {alphabet}"
                        ))
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self(letters))
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Position of the word among the level-n words, first letter most significant.
    pub fn index(&self, alphabet: usize) -> usize {
        self.0.iter().fold(0, |acc, &l| acc * alphabet + l as usize)
    }

    pub fn from_index(mut index: usize, level: usize, alphabet: usize) -> Self {
        let mut letters = vec![0u8; level];
        for slot in letters.iter_mut().rev() {
            *slot = (index % alphabet) as u8;
            index /= alphabet;
        }
        Self(letters)
    }

    pub fn prefixed(&self, letter: u8) -> Self {
        let mut letters = Vec::with_capacity(self.0.len() + 1);
        letters.push(letter);
        letters.extend_from_slice(&self.0);
        Self(letters)
    }

    pub fn constant(letter: u8, len: usize) -> Self {
        Self(vec![letter; len])
    }
}

impl fmt::Display for TreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("()");
        }
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// A bijection of `{0, .., d-1}` stored as its image list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidInput(format!(
                    "{images:?} is not a permutation"
                )));
            }
        }
        Ok(Self(images))
    }

    pub fn identity(d: usize) -> Self {
        Self((0..d).collect())
    }

    /// `i -> i + shift mod d`
    pub fn cycle(d: usize, shift: usize) -> Self {
        Self((0..d).map(|i| (i + shift) % d).collect())
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Self(inv)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Self(other.0.iter().map(|&i| self.0[i]).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct State {
    pub name: String,
    pub output: Permutation,
    /// Target state for each input letter.
    pub transitions: Vec<usize>,
}

/// Finite invertible Mealy machine with a distinguished initial state.
///
/// Reading letter `x` in state `q` writes `output(q)(x)` and moves to
/// `transitions(q)[x]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transducer {
    alphabet: usize,
    states: Vec<State>,
    initial: usize,
}

impl Transducer {
    pub fn new(alphabet: usize, states: Vec<State>, initial: usize) -> Result<Self> {
        if alphabet < 2 {
            return Err(Error::InvalidInput(
                "alphabet must have at least two letters".into(),
            ));
        }
        if initial >= states.len() {
            return Err(Error::InvalidInput(format!(
                "initial state {initial} out of range"
            )));
        }
        for s in &states {
            if s.output.degree() != alphabet || s.transitions.len() != alphabet {
                return Err(Error::InvalidInput(format!(
                    "state `{}` is not total",
                    s.name
                )));
            }
            if s.transitions.iter().any(|&t| t >= states.len()) {
                return Err(Error::InvalidInput(format!(
                    "state `{}` has a dangling transition",
                    s.name
                )));
            }
        }
        Ok(Self {
            alphabet,
            states,
            initial,
        })
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s.name == name)
    }

    pub fn with_initial(&self, initial: usize) -> Result<Self> {
        Self::new(self.alphabet, self.states.clone(), initial)
    }

    pub fn apply(&self, word: &TreeWord) -> Result<TreeWord> {
        self.apply_from(self.initial, word)
    }

    pub fn apply_from(&self, mut state: usize, word: &TreeWord) -> Result<TreeWord> {
        let mut out = Vec::with_capacity(word.len());
        for &letter in word.letters() {
            let x = letter as usize;
            if x >= self.alphabet {
                return Err(Error::InvalidInput(format!(
                    "letter {x} out of range for alphabet of size {}",
                    self.alphabet
                )));
            }
            let s = &self.states[state];
            out.push(s.output.apply(x) as u8);
            state = s.transitions[x];
        }
        Ok(TreeWord(out))
    }

    /// States acting as the identity: trivial output and transitions only to
    /// such states (greatest fixed point).
    pub fn trivial_states(&self) -> Vec<bool> {
        let mut trivial: Vec<bool> = self.states.iter().map(|s| s.output.is_identity()).collect();
        loop {
            let mut changed = false;
            for (i, s) in self.states.iter().enumerate() {
                if trivial[i] && s.transitions.iter().any(|&t| !trivial[t]) {
                    trivial[i] = false;
                    changed = true;
                }
            }
            if !changed {
                return trivial;
            }
        }
    }

    /// Adds an explicit inverse state `q^-1` for every non-trivial state `q`.
    ///
    /// `q^-1` has output `output(q)^-1`, and on letter `y` moves to the inverse
    /// of `transitions(q)[output(q)^-1(y)]`. Trivial states are their own inverse.
    pub fn with_inverses(&self) -> Self {
        let trivial = self.trivial_states();
        let n = self.states.len();
        let mut inverse_of = vec![0; n];
        let mut next = n;
        for i in 0..n {
            if trivial[i] {
                inverse_of[i] = i;
            } else {
                inverse_of[i] = next;
                next += 1;
            }
        }
        let mut states = self.states.clone();
        for (i, s) in self.states.iter().enumerate() {
            if trivial[i] {
                continue;
            }
            let inv = s.output.inverse();
            let transitions = (0..self.alphabet)
                .map(|y| inverse_of[s.transitions[inv.apply(y)]])
                .collect();
            states.push(State {
                name: format!("{}^-1", s.name),
                output: inv,
                transitions,
            });
        }
        Self {
            alphabet: self.alphabet,
            states,
            initial: self.initial,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn adding_machine() -> Transducer {
        // binary odometer: t(0w) = 1w, t(1w) = 0 t(w)
        let states = vec![
            State {
                name: "t".into(),
                output: Permutation::cycle(2, 1),
                transitions: vec![1, 0],
            },
            State {
                name: "e".into(),
                output: Permutation::identity(2),
                transitions: vec![1, 1],
            },
        ];
        Transducer::new(2, states, 0).unwrap()
    }

    #[test]
    fn word_index_round_trip() {
        for n in 0..5 {
            for i in 0..3usize.pow(n as u32) {
                let w = TreeWord::from_index(i, n, 3);
                assert_eq!(w.index(3), i);
            }
        }
        assert_eq!(TreeWord::parse("10", 2).unwrap().index(2), 2);
    }

    #[test]
    fn rejects_bad_letters() {
        let t = adding_machine();
        assert!(t.apply(&TreeWord::new(vec![0, 2])).is_err());
        assert!(TreeWord::parse("012", 2).is_err());
    }

    #[test]
    fn odometer_and_its_inverse() {
        let t = adding_machine();
        assert_eq!(
            t.apply(&TreeWord::parse("110", 2).unwrap())
                .unwrap()
                .to_string(),
            "001"
        );
        let full = t.with_inverses();
        assert_eq!(full.states().len(), 3);
        let inv = full
            .with_initial(full.state_index("t^-1").unwrap())
            .unwrap();
        for i in 0..16 {
            let w = TreeWord::from_index(i, 4, 2);
            assert_eq!(inv.apply(&t.apply(&w).unwrap()).unwrap(), w);
        }
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        let p = Permutation::new(vec![2, 0, 1]).unwrap();
        assert!(p.compose(&p.inverse()).is_identity());
    }
}
