use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point on the floor plan, in meters. Serialized as `[x, y]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct NodePosition {
    pub x: f64,
    pub y: f64,
}

impl NodePosition {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance_to(&self, other: &NodePosition) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl From<[f64; 2]> for NodePosition {
    fn from([x, y]: [f64; 2]) -> Self {
        Self { x, y }
    }
}

impl From<NodePosition> for [f64; 2] {
    fn from(p: NodePosition) -> Self {
        [p.x, p.y]
    }
}

/// Axis-aligned rectangle, serialized as `[x0, y0, x1, y1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Rect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Rect {
    pub const fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Self { x0, y0, x1, y1 }
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    pub fn contains(&self, p: &NodePosition) -> bool {
        p.x >= self.x0 && p.x <= self.x1 && p.y >= self.y0 && p.y <= self.y1
    }

    fn validate(&self) -> Result<()> {
        let finite = [self.x0, self.y0, self.x1, self.y1].iter().all(|v| v.is_finite());
        if !finite || self.width() <= 0.0 || self.height() <= 0.0 {
            return Err(Error::config(format!("degenerate apartment rectangle {self:?}")));
        }
        Ok(())
    }

    fn edges(&self) -> [(NodePosition, NodePosition); 4] {
        let (a, b) = (NodePosition::new(self.x0, self.y0), NodePosition::new(self.x1, self.y0));
        let (c, d) = (NodePosition::new(self.x1, self.y1), NodePosition::new(self.x0, self.y1));
        [(a, b), (b, c), (c, d), (d, a)]
    }
}

impl From<[f64; 4]> for Rect {
    fn from([x0, y0, x1, y1]: [f64; 4]) -> Self {
        Self { x0, y0, x1, y1 }
    }
}

impl From<Rect> for [f64; 4] {
    fn from(r: Rect) -> Self {
        [r.x0, r.y0, r.x1, r.y1]
    }
}

/// Walls of a single floor as line segments.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FloorPlan {
    walls: Vec<(NodePosition, NodePosition)>,
}

impl FloorPlan {
    /// Outer walls of each apartment. A wall shared by two touching
    /// apartments is kept once.
    pub fn from_apartments(apartments: &[Rect]) -> Result<Self> {
        let mut walls: Vec<(NodePosition, NodePosition)> = Vec::new();
        for r in apartments {
            r.validate()?;
            for (a, b) in r.edges() {
                let dup = walls.iter().any(|&(p, q)| (p == a && q == b) || (p == b && q == a));
                if !dup {
                    walls.push((a, b));
                }
            }
        }
        Ok(Self { walls })
    }

    pub fn walls(&self) -> &[(NodePosition, NodePosition)] {
        &self.walls
    }

    /// Number of walls the straight path from `a` to `b` crosses. Paths that
    /// only graze a wall end or run along a wall do not count.
    pub fn walls_between(&self, a: &NodePosition, b: &NodePosition) -> u32 {
        self.walls.iter().filter(|(p, q)| segments_cross(a, b, p, q)).count() as u32
    }
}

fn orient(a: &NodePosition, b: &NodePosition, c: &NodePosition) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

fn segments_cross(a: &NodePosition, b: &NodePosition, p: &NodePosition, q: &NodePosition) -> bool {
    let (o1, o2) = (orient(a, b, p), orient(a, b, q));
    let (o3, o4) = (orient(p, q, a), orient(p, q, b));
    o1 * o2 < 0.0 && o3 * o4 < 0.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_crossed_walls() {
        let plan =
            FloorPlan::from_apartments(&[Rect::new(0.0, 0.0, 10.0, 7.0), Rect::new(17.0, 0.0, 27.0, 7.0)]).unwrap();
        assert_eq!(plan.walls().len(), 8);
        let a = NodePosition::new(5.0, 3.0);
        let b = NodePosition::new(20.0, 4.0);
        assert_eq!(plan.walls_between(&a, &b), 2);
        assert_eq!(plan.walls_between(&b, &a), 2);
        assert_eq!(plan.walls_between(&a, &NodePosition::new(9.0, 1.0)), 0);
    }

    #[test]
    fn shared_wall_counted_once() {
        let plan =
            FloorPlan::from_apartments(&[Rect::new(0.0, 0.0, 10.0, 7.0), Rect::new(10.0, 0.0, 20.0, 7.0)]).unwrap();
        assert_eq!(plan.walls().len(), 7);
        let n = plan.walls_between(&NodePosition::new(5.0, 3.0), &NodePosition::new(15.0, 3.0));
        assert_eq!(n, 1);
    }

    #[test]
    fn rejects_degenerate_rect() {
        assert!(FloorPlan::from_apartments(&[Rect::new(0.0, 0.0, 0.0, 5.0)]).is_err());
    }

    #[test]
    fn serde_as_arrays() {
        let p: NodePosition = serde_json::from_str("[1.5, 2.0]").unwrap();
        assert_eq!(p, NodePosition::new(1.5, 2.0));
        assert_eq!(serde_json::to_string(&p).unwrap(), "[1.5,2.0]");
    }
}
