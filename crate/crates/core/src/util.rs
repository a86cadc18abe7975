//! Small enumeration helpers shared across modules.

/// Iterates over all index tuples `v` with `v[i] < lens[i]`.
/// An empty `lens` yields exactly one empty tuple.
pub fn cartesian(lens: &[usize]) -> CartesianIter {
    CartesianIter {
        lens: lens.to_vec(),
        state: if lens.iter().any(|&l| l == 0) {
            None
        } else {
            Some(vec![0; lens.len()])
        },
    }
}

pub struct CartesianIter {
    lens: Vec<usize>,
    state: Option<Vec<usize>>,
}

impl Iterator for CartesianIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.state.clone()?;
        // advance
        let mut next = cur.clone();
        let mut k = 0;
        loop {
            if k == self.lens.len() {
                self.state = None;
                break;
            }
            next[k] += 1;
            if next[k] < self.lens[k] {
                self.state = Some(next);
                break;
            }
            next[k] = 0;
            k += 1;
        }
        Some(cur)
    }
}

#[cfg(test)]
mod tests {
    use super::cartesian;

    #[test]
    fn counts() {
        assert_eq!(cartesian(&[]).count(), 1);
        assert_eq!(cartesian(&[3]).count(), 3);
        assert_eq!(cartesian(&[2, 3, 4]).count(), 24);
        assert_eq!(cartesian(&[2, 0, 4]).count(), 0);
    }
}
