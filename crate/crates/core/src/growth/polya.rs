use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{param, Result};

/// Ball counts of a Pólya urn where each draw returns the ball plus two
/// more of its color.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UrnState {
    pub counts: Vec<u64>,
}

impl UrnState {
    pub fn colors(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Counts odd and summing to `colors + 2 * draws`.
    pub fn is_consistent(&self, draws: u64) -> bool {
        self.counts.iter().all(|c| c % 2 == 1) && self.total() == self.colors() as u64 + 2 * draws
    }
}

/// Urn with one ball of each of `colors` colors after `draws` draws.
pub fn polya_sample<R: Rng + ?Sized>(draws: usize, colors: usize, rng: &mut R) -> Result<UrnState> {
    if colors == 0 {
        return Err(param("an urn needs at least one color"));
    }
    let mut balls: Vec<u32> = Vec::with_capacity(colors + 2 * draws);
    balls.extend(0..colors as u32);
    let mut counts = vec![1u64; colors];
    for _ in 0..draws {
        let c = balls[rng.random_range(0..balls.len())];
        balls.push(c);
        balls.push(c);
        counts[c as usize] += 2;
    }
    Ok(UrnState { counts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::from_seed;

    #[test]
    fn no_draws_is_all_ones() {
        let u = polya_sample(0, 5, &mut from_seed(1)).unwrap();
        assert_eq!(u.counts, vec![1; 5]);
        assert!(polya_sample(3, 0, &mut from_seed(1)).is_err());
    }

    #[test]
    fn one_draw_two_colors_is_fair() {
        let mut rng = from_seed(2);
        let first = (0..4000)
            .filter(|_| polya_sample(1, 2, &mut rng).unwrap().counts == vec![3, 1])
            .count();
        // Binomial(4000, 1/2): 4 standard deviations is about 126.
        assert!((first as i64 - 2000).abs() < 127, "{first}");
    }

    #[test]
    fn counts_stay_odd() {
        let mut rng = from_seed(3);
        for draws in [0, 1, 7, 50] {
            assert!(polya_sample(draws, 4, &mut rng).unwrap().is_consistent(draws as u64));
        }
    }
}
