//! The navigation maze: a self-avoiding path of sign-posted cells.
//!
//! Cue values: 1 turn left, 2 turn right, 3 straight ahead, 4 repeat the
//! previous action, 0 off the path. A cue tells the organism how to turn
//! before taking the next step along the path.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const CUE_OFF_PATH: u32 = 0;
pub const CUE_LEFT: u32 = 1;
pub const CUE_RIGHT: u32 = 2;
pub const CUE_FORWARD: u32 = 3;
pub const CUE_REPEAT: u32 = 4;

/// Eight compass headings, clockwise from north.
pub const DIRECTIONS: [(i32, i32); 8] = [
    (0, -1),
    (1, -1),
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Turn {
    Left,
    Right,
    Forward,
}

impl Turn {
    fn delta(self) -> u8 {
        match self {
            Turn::Left => 7,
            Turn::Right => 1,
            Turn::Forward => 0,
        }
    }

    fn cue(self) -> u32 {
        match self {
            Turn::Left => CUE_LEFT,
            Turn::Right => CUE_RIGHT,
            Turn::Forward => CUE_FORWARD,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pose {
    pub x: i32,
    pub y: i32,
    /// Index into [`DIRECTIONS`].
    pub heading: u8,
}

impl Pose {
    pub fn rotate_left(&mut self) {
        self.heading = (self.heading + 7) % 8;
    }

    pub fn rotate_right(&mut self) {
        self.heading = (self.heading + 1) % 8;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NavGrid {
    pub width: i32,
    pub height: i32,
    cues: Vec<u8>,
    pub path: Vec<(i32, i32)>,
    /// Heading an organism faces when placed on the first path cell.
    pub start_heading: u8,
}

impl NavGrid {
    /// Generates a random path of `steps` moves. Deterministic in `rng`.
    pub fn generate(rng: &mut ChaCha8Rng, width: i32, height: i32, steps: usize, repeat_prob: f64) -> NavGrid {
        assert!(width >= 3 && height >= 3, "maze grid too small");
        let turns = [Turn::Left, Turn::Right, Turn::Forward];
        loop {
            let start = (width / 2, height / 2);
            let start_heading: u8 = rng.gen_range(0..8);
            let mut visited = vec![false; (width * height) as usize];
            visited[(start.1 * width + start.0) as usize] = true;
            let mut path = vec![start];
            let mut actions = Vec::with_capacity(steps);
            let mut heading = start_heading;
            let mut pos = start;
            let mut stuck = false;
            for _ in 0..steps {
                let options: Vec<(Turn, u8, (i32, i32))> = turns
                    .iter()
                    .filter_map(|&t| {
                        let h = (heading + t.delta()) % 8;
                        let (dx, dy) = DIRECTIONS[h as usize];
                        let next = (pos.0 + dx, pos.1 + dy);
                        let inside = next.0 >= 0 && next.0 < width && next.1 >= 0 && next.1 < height;
                        (inside && !visited[(next.1 * width + next.0) as usize]).then_some((t, h, next))
                    })
                    .collect();
                if options.is_empty() {
                    stuck = true;
                    break;
                }
                let (t, h, next) = options[rng.gen_range(0..options.len())];
                visited[(next.1 * width + next.0) as usize] = true;
                actions.push(t);
                path.push(next);
                heading = h;
                pos = next;
            }
            if stuck {
                continue;
            }
            let mut cues = vec![CUE_OFF_PATH as u8; (width * height) as usize];
            let mut previous: Option<Turn> = None;
            for (i, &t) in actions.iter().enumerate() {
                let cue = if previous == Some(t) && rng.gen_bool(repeat_prob) {
                    CUE_REPEAT
                } else {
                    t.cue()
                };
                let (x, y) = path[i];
                cues[(y * width + x) as usize] = cue as u8;
                previous = Some(t);
            }
            let (x, y) = path[steps];
            cues[(y * width + x) as usize] = CUE_FORWARD as u8;
            return NavGrid {
                width,
                height,
                cues,
                path,
                start_heading,
            };
        }
    }

    /// Number of moves along the path.
    pub fn path_len(&self) -> usize {
        self.path.len() - 1
    }

    pub fn start_pose(&self) -> Pose {
        let (x, y) = self.path[0];
        Pose {
            x,
            y,
            heading: self.start_heading,
        }
    }

    pub fn cue(&self, x: i32, y: i32) -> u32 {
        let x = x.rem_euclid(self.width);
        let y = y.rem_euclid(self.height);
        self.cues[(y * self.width + x) as usize] as u32
    }

    /// Moves one cell along the heading, wrapping at the grid edge.
    pub fn advance(&self, pose: &mut Pose) {
        let (dx, dy) = DIRECTIONS[pose.heading as usize];
        pose.x = (pose.x + dx).rem_euclid(self.width);
        pose.y = (pose.y + dy).rem_euclid(self.height);
    }
}

/// Per-lifetime navigation state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walker {
    pub grid: NavGrid,
    pub pose: Pose,
    pub progress: usize,
}

impl Walker {
    pub fn new(grid: NavGrid) -> Walker {
        let pose = grid.start_pose();
        Walker {
            grid,
            pose,
            progress: 0,
        }
    }

    pub fn sense(&self) -> u32 {
        self.grid.cue(self.pose.x, self.pose.y)
    }

    /// Moves forward; returns true when the move entered the next path cell.
    pub fn step_forward(&mut self) -> bool {
        self.grid.advance(&mut self.pose);
        let next = self.progress + 1;
        if next < self.grid.path.len() && self.grid.path[next] == (self.pose.x, self.pose.y) {
            self.progress = next;
            true
        } else {
            false
        }
    }
}

/// Fraction of the path completed.
pub fn nav_quality(progress: usize, path_len: usize) -> f64 {
    if path_len == 0 {
        return 0.0;
    }
    (progress.min(path_len) as f64) / path_len as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn grid(seed: u64) -> NavGrid {
        NavGrid::generate(&mut ChaCha8Rng::seed_from_u64(seed), 51, 51, 100, 0.5)
    }

    #[test]
    fn rotations_invert_and_cycle() {
        let mut p = Pose { x: 0, y: 0, heading: 3 };
        p.rotate_left();
        p.rotate_right();
        assert_eq!(p.heading, 3);
        for _ in 0..8 {
            p.rotate_right();
        }
        assert_eq!(p.heading, 3);
    }

    #[test]
    fn path_is_connected_and_self_avoiding() {
        for seed in 0..20 {
            let g = grid(seed);
            assert_eq!(g.path_len(), 100);
            for w in g.path.windows(2) {
                let (dx, dy) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
                assert!(dx.abs() <= 1 && dy.abs() <= 1 && (dx, dy) != (0, 0));
            }
            let mut cells = g.path.clone();
            cells.sort();
            cells.dedup();
            assert_eq!(cells.len(), g.path.len());
            for &(x, y) in &g.path {
                assert_ne!(g.cue(x, y), CUE_OFF_PATH);
            }
        }
    }

    #[test]
    fn generation_is_deterministic() {
        assert_eq!(grid(7), grid(7));
        assert_ne!(grid(7).path, grid(8).path);
    }

    /// Follows cues exactly as an organism with one action of memory would.
    #[test]
    fn scripted_walker_reaches_the_end() {
        for seed in 0..20 {
            let mut w = Walker::new(grid(seed));
            let mut last = CUE_FORWARD;
            for _ in 0..w.grid.path_len() {
                let mut cue = w.sense();
                if cue == CUE_REPEAT {
                    cue = last;
                }
                match cue {
                    CUE_LEFT => w.pose.rotate_left(),
                    CUE_RIGHT => w.pose.rotate_right(),
                    _ => {}
                }
                last = cue;
                assert!(w.step_forward());
            }
            assert_eq!(w.progress, 100);
            assert_eq!(nav_quality(w.progress, 100), 1.0);
        }
    }

    #[test]
    fn quality_is_linear() {
        assert_eq!(nav_quality(0, 100), 0.0);
        assert_eq!(nav_quality(50, 100), 0.5);
        assert_eq!(nav_quality(100, 100), 1.0);
    }

    #[test]
    fn off_path_moves_earn_nothing() {
        let mut w = Walker::new(grid(3));
        w.pose.rotate_left();
        w.pose.rotate_left();
        w.pose.rotate_left();
        w.pose.rotate_left();
        assert!(!w.step_forward());
        assert_eq!(w.progress, 0);
    }
}
