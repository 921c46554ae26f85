use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Instance, SolverError};
use crate::formula::SignatureEnv;

/// How many constraints of each builtin relation to draw, e.g.
/// `"Betw:3,<:2"`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    entries: Vec<(String, usize)>,
}

impl Profile {
    pub fn new(entries: Vec<(String, usize)>) -> Result<Self, SolverError> {
        let env = SignatureEnv::standard();
        for (name, _) in &entries {
            if !env.contains(name) {
                return Err(SolverError::BadProfile(format!("unknown relation '{name}'")));
            }
        }
        Ok(Profile { entries })
    }

    pub fn entries(&self) -> &[(String, usize)] {
        &self.entries
    }

    pub fn total(&self) -> usize {
        self.entries.iter().map(|(_, c)| c).sum()
    }
}

impl FromStr for Profile {
    type Err = SolverError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut entries = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, count) = part
                .rsplit_once(':')
                .ok_or_else(|| SolverError::BadProfile(format!("expected Name:count, got '{part}'")))?;
            let count = count
                .trim()
                .parse()
                .map_err(|_| SolverError::BadProfile(format!("bad count in '{part}'")))?;
            entries.push((name.trim().to_string(), count));
        }
        if entries.is_empty() {
            return Err(SolverError::BadProfile("empty profile".into()));
        }
        Profile::new(entries)
    }
}

/// A reproducible random instance over `n` variables `x1..xn` with argument
/// variables drawn uniformly (with repetition).
pub fn random_instance(seed: u64, n: usize, profile: &Profile) -> Instance {
    let mut inst = Instance::with_vars(n);
    if n == 0 {
        return inst;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (name, count) in profile.entries() {
        let arity = inst.env().get(name).expect("profile names are validated").arity();
        for _ in 0..*count {
            let args: Vec<usize> = (0..arity).map(|_| rng.gen_range(0..n)).collect();
            inst.add_constraint(name, &args)
                .expect("builtin relations are nonempty and arguments in range");
        }
    }
    inst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_in_seed() {
        let p: Profile = "Betw:3".parse().unwrap();
        assert_eq!(random_instance(1, 4, &p), random_instance(1, 4, &p));
        assert_ne!(random_instance(1, 4, &p), random_instance(2, 4, &p));
        assert_eq!(random_instance(1, 4, &p).constraints().len(), 3);
    }

    #[test]
    fn zero_variables() {
        let p: Profile = "Betw:3".parse().unwrap();
        let inst = random_instance(5, 0, &p);
        assert_eq!(inst.var_count(), 0);
        assert!(inst.constraints().is_empty());
        assert!(crate::solver::solve(&inst).is_sat());
    }

    #[test]
    fn bad_profiles() {
        for bad in ["", "Betw", "Betw:x", "Nope:2"] {
            assert!(matches!(bad.parse::<Profile>(), Err(SolverError::BadProfile(_))), "{bad}");
        }
        let p: Profile = "<:2, <=:1,#:0".parse().unwrap();
        assert_eq!(p.total(), 3);
    }
}
