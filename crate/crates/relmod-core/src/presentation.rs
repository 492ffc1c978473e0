//! Finite group presentations `⟨X; R⟩` with a prime configuration.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::word::Word;

/// Discrete presentations quantify over a configured prime set; pro-p
/// presentations fix a single prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Discrete,
    ProP,
}

/// Size gate for inputs; larger presentations are rejected up front instead
/// of attempted.
#[derive(Clone, Copy, Debug)]
pub struct PresentationLimits {
    pub max_generators: usize,
    pub max_relators: usize,
}

impl Default for PresentationLimits {
    fn default() -> Self {
        PresentationLimits { max_generators: 4, max_relators: 6 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PresentationError {
    NoGenerators,
    TooManyGenerators { count: usize, max: usize },
    TooManyRelators { count: usize, max: usize },
    DuplicateGenerator(String),
    BadGeneratorName(String),
    RelatorOutOfRange { relator: usize, gen: u16 },
    EmptyPrimes,
    NotPrime(u64),
    DuplicatePrime(u64),
    ProPNeedsSinglePrime { count: usize },
}

impl fmt::Display for PresentationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PresentationError::NoGenerators => write!(f, "presentation declares no generators"),
            PresentationError::TooManyGenerators { count, max } => {
                write!(f, "{count} generators exceed the configured bound {max}")
            }
            PresentationError::TooManyRelators { count, max } => {
                write!(f, "{count} relators exceed the configured bound {max}")
            }
            PresentationError::DuplicateGenerator(name) => {
                write!(f, "generator `{name}` declared twice")
            }
            PresentationError::BadGeneratorName(name) => {
                write!(f, "invalid generator name `{name}`")
            }
            PresentationError::RelatorOutOfRange { relator, gen } => {
                write!(f, "relator {relator} references undeclared generator index {gen}")
            }
            PresentationError::EmptyPrimes => write!(f, "prime list is empty"),
            PresentationError::NotPrime(p) => write!(f, "{p} is not a prime"),
            PresentationError::DuplicatePrime(p) => write!(f, "prime {p} listed twice"),
            PresentationError::ProPNeedsSinglePrime { count } => {
                write!(f, "pro-p mode needs exactly one prime, got {count}")
            }
        }
    }
}

impl core::error::Error for PresentationError {}

/// A presentation `⟨X; R⟩` plus the prime configuration it is examined at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    id: String,
    generators: Vec<String>,
    relators: Vec<Word>,
    mode: Mode,
    primes: Vec<u64>,
}

impl Presentation {
    pub fn new(
        id: &str,
        generators: Vec<String>,
        relators: Vec<Word>,
        mode: Mode,
        primes: Vec<u64>,
        limits: &PresentationLimits,
    ) -> Result<Self, PresentationError> {
        if generators.is_empty() {
            return Err(PresentationError::NoGenerators);
        }
        if generators.len() > limits.max_generators {
            return Err(PresentationError::TooManyGenerators {
                count: generators.len(),
                max: limits.max_generators,
            });
        }
        if relators.len() > limits.max_relators {
            return Err(PresentationError::TooManyRelators {
                count: relators.len(),
                max: limits.max_relators,
            });
        }
        for (i, name) in generators.iter().enumerate() {
            if !valid_name(name) {
                return Err(PresentationError::BadGeneratorName(name.clone()));
            }
            if generators[..i].contains(name) {
                return Err(PresentationError::DuplicateGenerator(name.clone()));
            }
        }
        let d = generators.len() as u16;
        for (i, r) in relators.iter().enumerate() {
            if let Some(g) = r.max_generator() {
                if g >= d {
                    return Err(PresentationError::RelatorOutOfRange { relator: i, gen: g });
                }
            }
        }
        if primes.is_empty() {
            return Err(PresentationError::EmptyPrimes);
        }
        for (i, &p) in primes.iter().enumerate() {
            if !is_prime(p) {
                return Err(PresentationError::NotPrime(p));
            }
            if primes[..i].contains(&p) {
                return Err(PresentationError::DuplicatePrime(p));
            }
        }
        if mode == Mode::ProP && primes.len() != 1 {
            return Err(PresentationError::ProPNeedsSinglePrime { count: primes.len() });
        }
        Ok(Presentation { id: id.to_string(), generators, relators, mode, primes })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generators
    }

    pub fn gen_count(&self) -> u16 {
        self.generators.len() as u16
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Subpresentation with relator `idx` removed; same generators and primes.
    pub fn without_relator(&self, idx: usize) -> Presentation {
        let mut relators = self.relators.clone();
        relators.remove(idx);
        Presentation {
            id: alloc::format!("{}-minus-{}", self.id, idx),
            generators: self.generators.clone(),
            relators,
            mode: self.mode,
            primes: self.primes.clone(),
        }
    }

    /// Canonical DSL rendering; `parse` of the result reproduces the value.
    pub fn print_dsl(&self) -> String {
        use core::fmt::Write;
        let mut s = String::new();
        let mode = match self.mode {
            Mode::Discrete => "discrete",
            Mode::ProP => "pro-p",
        };
        let _ = write!(s, "mode: {mode};\nprimes:");
        for p in &self.primes {
            let _ = write!(s, " {p}");
        }
        let _ = write!(s, ";\ngens");
        for g in &self.generators {
            let _ = write!(s, " {g}");
        }
        let _ = write!(s, ";\nrels");
        for (i, r) in self.relators.iter().enumerate() {
            let sep = if i == 0 { " " } else { ", " };
            let _ = write!(s, "{sep}{}", self.word_to_dsl(r));
        }
        s.push_str(";\n");
        s
    }

    /// Renders a reduced word in the DSL surface syntax.
    pub fn word_to_dsl(&self, w: &Word) -> String {
        use core::fmt::Write;
        if w.is_identity() {
            return "()".to_string();
        }
        let mut s = String::new();
        for (i, l) in w.letters().iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            let name = &self.generators[l.gen as usize];
            if l.exp == 1 {
                let _ = write!(s, "{name}");
            } else {
                let _ = write!(s, "{name}^{}", l.exp);
            }
        }
        s
    }
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{commutator, Word};
    use alloc::vec;

    fn torus() -> Presentation {
        let c = commutator(&Word::generator(0), &Word::generator(1));
        Presentation::new(
            "torus",
            vec!["x".into(), "y".into()],
            vec![c],
            Mode::Discrete,
            vec![2, 3],
            &PresentationLimits::default(),
        )
        .unwrap()
    }

    #[test]
    fn accepts_torus() {
        let p = torus();
        assert_eq!(p.gen_count(), 2);
        assert_eq!(p.relators().len(), 1);
    }

    #[test]
    fn rejects_bad_primes() {
        let e = Presentation::new(
            "bad",
            vec!["x".into()],
            vec![],
            Mode::Discrete,
            vec![4],
            &PresentationLimits::default(),
        )
        .unwrap_err();
        assert_eq!(e, PresentationError::NotPrime(4));
    }

    #[test]
    fn rejects_oversized() {
        let gens: Vec<_> = ["a", "b", "c", "d", "e"].iter().map(|s| s.to_string()).collect();
        let e = Presentation::new(
            "big",
            gens,
            vec![],
            Mode::Discrete,
            vec![2],
            &PresentationLimits::default(),
        )
        .unwrap_err();
        assert!(matches!(e, PresentationError::TooManyGenerators { count: 5, max: 4 }));
    }

    #[test]
    fn pro_p_needs_one_prime() {
        let e = Presentation::new(
            "p",
            vec!["x".into()],
            vec![],
            Mode::ProP,
            vec![2, 3],
            &PresentationLimits::default(),
        )
        .unwrap_err();
        assert!(matches!(e, PresentationError::ProPNeedsSinglePrime { count: 2 }));
    }

    #[test]
    fn relator_range_checked() {
        let e = Presentation::new(
            "oops",
            vec!["x".into()],
            vec![Word::generator(1)],
            Mode::Discrete,
            vec![2],
            &PresentationLimits::default(),
        )
        .unwrap_err();
        assert!(matches!(e, PresentationError::RelatorOutOfRange { relator: 0, gen: 1 }));
    }

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(is_prime(3));
        assert!(is_prime(97));
        assert!(!is_prime(1));
        assert!(!is_prime(91));
    }
}
