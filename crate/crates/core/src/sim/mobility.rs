//! Node movement: random waypoint, closed rectangular loops and static
//! hotspots.

use rand::Rng;

use super::rng::SimRng;
use crate::types::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    /// Random waypoint, no pause.
    Random,
    /// Follows a fixed closed loop (bus-line style).
    Regular,
    /// Never moves.
    Fixed,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Mobility {
    Fixed,
    Waypoint {
        target: Point,
        speed: f64,
    },
    Loop {
        corners: [Point; 4],
        /// Speed on the segment that ends at `corners[i]`.
        speeds: [f64; 4],
        /// Index of the corner currently headed for.
        next: usize,
    },
}

/// Area and nominal speed shared by all movers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arena {
    pub width: f64,
    pub height: f64,
    pub speed: f64,
}

impl Arena {
    pub fn contains(&self, p: Point) -> bool {
        (0.0..=self.width).contains(&p.x) && (0.0..=self.height).contains(&p.y)
    }

    pub fn random_point(&self, rng: &mut SimRng) -> Point {
        Point::new(
            rng.random_range(0.0..self.width),
            rng.random_range(0.0..self.height),
        )
    }

    pub fn random_speed(&self, rng: &mut SimRng) -> f64 {
        rng.random_range(0.5 * self.speed..=1.5 * self.speed)
    }
}

impl Mobility {
    /// Builds the mobility model for a node of `kind` together with its
    /// starting position.
    pub fn build(kind: NodeKind, arena: &Arena, rng: &mut SimRng) -> (Mobility, Point) {
        match kind {
            NodeKind::Fixed => (Mobility::Fixed, arena.random_point(rng)),
            NodeKind::Random => {
                let start = arena.random_point(rng);
                let target = arena.random_point(rng);
                let speed = arena.random_speed(rng);
                (Mobility::Waypoint { target, speed }, start)
            }
            NodeKind::Regular => {
                let (w, h) = (arena.width, arena.height);
                let x0 = rng.random_range(0.05 * w..0.35 * w);
                let x1 = rng.random_range(0.65 * w..0.95 * w);
                let y0 = rng.random_range(0.05 * h..0.35 * h);
                let y1 = rng.random_range(0.65 * h..0.95 * h);
                let mut corners = [
                    Point::new(x0, y0),
                    Point::new(x1, y0),
                    Point::new(x1, y1),
                    Point::new(x0, y1),
                ];
                if rng.random_bool(0.5) {
                    corners.reverse();
                }
                let speeds = [(); 4].map(|_| arena.random_speed(rng));
                let next = rng.random_range(0..4);
                let from = corners[(next + 3) % 4];
                let frac: f64 = rng.random();
                let to = corners[next];
                let start = Point::new(from.x + (to.x - from.x) * frac, from.y + (to.y - from.y) * frac);
                (
                    Mobility::Loop {
                        corners,
                        speeds,
                        next,
                    },
                    start,
                )
            }
        }
    }

    pub fn kind(&self) -> NodeKind {
        match self {
            Mobility::Fixed => NodeKind::Fixed,
            Mobility::Waypoint { .. } => NodeKind::Random,
            Mobility::Loop { .. } => NodeKind::Regular,
        }
    }

    pub fn current_speed(&self) -> f64 {
        match self {
            Mobility::Fixed => 0.0,
            Mobility::Waypoint { speed, .. } => *speed,
            Mobility::Loop { speeds, next, .. } => speeds[*next],
        }
    }

    /// Advances `pos` by one step of `delta_t` seconds.
    pub fn step(&mut self, pos: Point, delta_t: f64, arena: &Arena, rng: &mut SimRng) -> Point {
        match self {
            Mobility::Fixed => pos,
            Mobility::Waypoint { target, speed } => {
                let (next, arrived) = pos.step_towards(*target, *speed * delta_t);
                if arrived {
                    *target = arena.random_point(rng);
                    *speed = arena.random_speed(rng);
                }
                next
            }
            Mobility::Loop {
                corners,
                speeds,
                next,
            } => {
                let mut pos = pos;
                let mut time_left = delta_t;
                // bounded: each pass either consumes the time or reaches a corner
                for _ in 0..64 {
                    let target = corners[*next];
                    let speed = speeds[*next];
                    let needed = pos.distance(target) / speed;
                    if needed > time_left {
                        pos = pos.step_towards(target, speed * time_left).0;
                        break;
                    }
                    pos = target;
                    time_left -= needed;
                    *next = (*next + 1) % 4;
                    if time_left <= 0.0 {
                        break;
                    }
                }
                pos
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::rng::{stream_rng, Stream};

    fn arena() -> Arena {
        Arena {
            width: 500.0,
            height: 500.0,
            speed: 10.0,
        }
    }

    #[test]
    fn fixed_never_moves() {
        let mut rng = stream_rng(3, Stream::Node(0));
        let (mut m, start) = Mobility::build(NodeKind::Fixed, &arena(), &mut rng);
        let mut p = start;
        for _ in 0..100 {
            p = m.step(p, 1.0, &arena(), &mut rng);
        }
        assert_eq!(p, start);
    }

    #[test]
    fn waypoint_step() {
        let mut rng = stream_rng(3, Stream::Node(0));
        let mut m = Mobility::Waypoint {
            target: Point::new(30.0, 40.0),
            speed: 10.0,
        };
        let p = m.step(Point::new(0.0, 0.0), 1.0, &arena(), &mut rng);
        assert!((p.x - 6.0).abs() < 1e-12 && (p.y - 8.0).abs() < 1e-12);
    }

    #[test]
    fn waypoint_redraws_on_arrival() {
        let mut rng = stream_rng(3, Stream::Node(0));
        let mut m = Mobility::Waypoint {
            target: Point::new(5.0, 0.0),
            speed: 10.0,
        };
        let p = m.step(Point::new(0.0, 0.0), 1.0, &arena(), &mut rng);
        assert_eq!(p, Point::new(5.0, 0.0));
        let Mobility::Waypoint { target, speed } = m else { unreachable!() };
        assert_ne!(target, Point::new(5.0, 0.0));
        assert!((5.0..=15.0).contains(&speed));
    }

    #[test]
    fn movers_stay_inside() {
        for kind in [NodeKind::Random, NodeKind::Regular] {
            let mut rng = stream_rng(9, Stream::Node(1));
            let a = arena();
            let (mut m, mut p) = Mobility::build(kind, &a, &mut rng);
            for _ in 0..2000 {
                let q = m.step(p, 1.0, &a, &mut rng);
                assert!(a.contains(q), "{kind:?} left the area at {q:?}");
                assert!(p.distance(q) <= 1.5 * a.speed + 1e-9);
                p = q;
            }
        }
    }

    #[test]
    fn loop_turns_corners() {
        let mut rng = stream_rng(1, Stream::Node(0));
        let corners = [
            Point::new(0.0, 0.0),
            Point::new(10.0, 0.0),
            Point::new(10.0, 10.0),
            Point::new(0.0, 10.0),
        ];
        let mut m = Mobility::Loop {
            corners,
            speeds: [4.0; 4],
            next: 1,
        };
        let mut p = Point::new(8.0, 0.0);
        p = m.step(p, 1.0, &arena(), &mut rng);
        assert!((p.x - 10.0).abs() < 1e-12 && (p.y - 2.0).abs() < 1e-12);
        assert_eq!(m.current_speed(), 4.0);
    }
}
