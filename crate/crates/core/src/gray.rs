//! Reflected mixed-radix Gray code: walks every tuple in `[0, base)^len`
//! changing exactly one digit by one step at a time.

pub(crate) struct GrayWalk {
    base: usize,
    digits: Vec<usize>,
    dirs: Vec<bool>,
    done: bool,
}

impl GrayWalk {
    /// Starts at the all-zero tuple.
    pub(crate) fn new(base: usize, len: usize) -> Self {
        assert!(base >= 1);
        GrayWalk {
            base,
            digits: vec![0; len],
            dirs: vec![true; len],
            done: false,
        }
    }

    #[cfg(test)]
    pub(crate) fn digits(&self) -> &[usize] {
        &self.digits
    }

    /// Advances to the next tuple, returning `(position, old, new)` of the
    /// digit that changed, or `None` once every tuple has been visited.
    pub(crate) fn step(&mut self) -> Option<(usize, usize, usize)> {
        if self.done {
            return None;
        }
        for k in 0..self.digits.len() {
            let old = self.digits[k];
            let new = if self.dirs[k] {
                (old + 1 < self.base).then_some(old + 1)
            } else {
                old.checked_sub(1)
            };
            match new {
                Some(new) => {
                    self.digits[k] = new;
                    return Some((k, old, new));
                }
                None => self.dirs[k] = !self.dirs[k],
            }
        }
        self.done = true;
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn visits_every_tuple_once() {
        for (base, len) in [(3, 4), (2, 5), (4, 2), (1, 3), (3, 0)] {
            let mut walk = GrayWalk::new(base, len);
            let mut seen = HashSet::new();
            seen.insert(walk.digits().to_vec());
            while let Some((k, old, new)) = walk.step() {
                assert_eq!(old.abs_diff(new), 1);
                assert_eq!(walk.digits()[k], new);
                assert!(seen.insert(walk.digits().to_vec()));
            }
            assert_eq!(seen.len(), base.pow(len as u32));
        }
    }
}
