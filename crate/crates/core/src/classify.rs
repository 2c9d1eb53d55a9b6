//! How a new edge crosses the old local frame around it, and how the ends of
//! a local swap region meet that frame.
//!
//! Horizontal edges are classified on transposed meshes, so every label and
//! quadrant refers to the frame of a vertical edge.

use crate::geom::{assign_vertex, segment_intersection, GeomError, Intersection, Point2, Quadrant, Segment};
use crate::mesh::{EdgeIndex, MeshError, StructuredQuadMesh};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassifyError {
    #[error("crossing counts H{h}V{v} do not form a valid case")]
    InvalidCombination { h: u8, v: u8 },
    #[error("edge {edge} is degenerate: {reason}")]
    DegenerateEdge { edge: EdgeIndex, reason: Degeneracy },
    #[error("no swap boundary intersection at vertex ({},{})", .0 .0 + 1, .0 .1 + 1)]
    MissingIntersection((usize, usize)),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Degeneracy {
    /// The edge touches a frame member at an endpoint of either segment.
    EndpointContact,
    /// The edge shares a segment with a frame member.
    CollinearOverlap,
    /// An endpoint of the edge lies on a frame member.
    VertexOnFrame,
}

impl std::fmt::Display for Degeneracy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Degeneracy::EndpointContact => "endpoint contact",
            Degeneracy::CollinearOverlap => "collinear overlap",
            Degeneracy::VertexOnFrame => "vertex on frame",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Group {
    Shrunk,
    Shifted,
    Stretched,
    DiagShrunk,
    DiagShifted,
    DiagStretched,
}

impl Group {
    pub fn abbrev(self) -> &'static str {
        match self {
            Group::Stretched => "st",
            Group::Shrunk => "sk",
            Group::Shifted => "sh",
            Group::DiagStretched => "dst",
            Group::DiagShrunk => "dsk",
            Group::DiagShifted => "dsh",
        }
    }

    /// Group implied by the endpoint regions: `a` for the top vertex, `b`
    /// for the bottom vertex.
    pub fn from_regions(a: Quadrant, b: Quadrant) -> Group {
        let h = a.is_up() as u8 + (!b.is_up()) as u8;
        let diag = a.is_right() != b.is_right();
        match (h, diag) {
            (0, false) => Group::Shrunk,
            (1, false) => Group::Shifted,
            (2, false) => Group::Stretched,
            (0, true) => Group::DiagShrunk,
            (1, true) => Group::DiagShifted,
            _ => Group::DiagStretched,
        }
    }
}

impl std::fmt::Display for Group {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Group::Shrunk => "shrunk",
            Group::Shifted => "shifted",
            Group::Stretched => "stretched",
            Group::DiagShrunk => "diagonally shrunk",
            Group::DiagShifted => "diagonally shifted",
            Group::DiagStretched => "diagonally stretched",
        })
    }
}

/// Group for a pair of crossing counts; `--` entries are errors.
pub fn group_from_counts(h: u8, v: u8) -> Result<Group, ClassifyError> {
    let g = match (h, v) {
        (0, 0) => Group::Shrunk,
        (1, 0) | (1, 2) => Group::Shifted,
        (2, 0) | (2, 2) => Group::Stretched,
        (0, 1) => Group::DiagShrunk,
        (1, 1) => Group::DiagShifted,
        (2, 1) | (2, 3) => Group::DiagStretched,
        _ => return Err(ClassifyError::InvalidCombination { h, v }),
    };
    Ok(g)
}

/// The 17 labels up to left/right reflection.
pub const SYMMETRIC_LABELS: [&str; 17] = [
    "H0V0", "H0V1", "H1V0t", "H1V0b", "H1V1At", "H1V1Ab", "H1V1Bt", "H1V1Bb", "H1V2t", "H1V2b", "H2V0", "H2V1A",
    "H2V1B", "H2V1C", "H2V2A", "H2V2B", "H2V3",
];

/// The 34 concrete labels (`/L` and `/R` variants).
pub fn concrete_labels() -> Vec<String> {
    SYMMETRIC_LABELS
        .iter()
        .flat_map(|l| [format!("{l}/L"), format!("{l}/R")])
        .collect()
}

pub const DEGENERATE_LABEL: &str = "degenerate";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    L,
    R,
}

/// Position of a vertical frame member relative to the centre edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Member {
    Lower,
    Middle,
    Upper,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeFrameClass {
    pub edge: EdgeIndex,
    pub h_count: u8,
    pub v_count: u8,
    /// Group from the crossing counts; `None` when degenerate.
    pub group: Option<Group>,
    /// Symmetric label, or [`DEGENERATE_LABEL`].
    pub label: String,
    pub side: Side,
    /// Region of the top endpoint relative to its old vertex.
    pub a_region: Quadrant,
    /// Region of the bottom endpoint relative to its old vertex.
    pub b_region: Quadrant,
    /// Proper crossings with frame members, ordered from bottom to top.
    pub points: Vec<(Point2, EdgeIndex)>,
    pub degenerate: Option<Degeneracy>,
}

impl EdgeFrameClass {
    /// Symmetric label plus the side suffix.
    pub fn concrete_label(&self) -> String {
        if self.degenerate.is_some() {
            return DEGENERATE_LABEL.to_string();
        }
        let s = match self.side {
            Side::L => "L",
            Side::R => "R",
        };
        format!("{}/{}", self.label, s)
    }
}

fn transpose_class(mut c: EdgeFrameClass) -> EdgeFrameClass {
    c.edge = c.edge.transposed();
    for (p, e) in &mut c.points {
        *p = p.swapped();
        *e = e.transposed();
    }
    c
}

/// Classify a new edge against the old frame around the same logical edge.
///
/// With `strict`, degenerate contacts are errors; otherwise they are flagged
/// and the label is [`DEGENERATE_LABEL`].
pub fn classify_edge_vs_frame(
    old: &StructuredQuadMesh,
    new: &StructuredQuadMesh,
    edge: EdgeIndex,
    strict: bool,
) -> Result<EdgeFrameClass, ClassifyError> {
    match edge {
        EdgeIndex::Vertical { i, j } => classify_vertical(old, new, i, j, strict),
        EdgeIndex::Horizontal { i, j } => {
            let c = classify_vertical(&old.transposed(), &new.transposed(), j, i, strict)?;
            Ok(transpose_class(c))
        }
    }
}

fn classify_vertical(
    old: &StructuredQuadMesh,
    new: &StructuredQuadMesh,
    i: usize,
    j: usize,
    strict: bool,
) -> Result<EdgeFrameClass, ClassifyError> {
    let edge = EdgeIndex::Vertical { i, j };
    let frame = old.local_frame(edge)?;
    let seg = new.edge_segment(edge);

    let a = assign_vertex(seg.b, old, (i, j + 1))?;
    let b = assign_vertex(seg.a, old, (i, j))?;
    let mut degenerate = (a.on_boundary || b.on_boundary).then_some(Degeneracy::VertexOnFrame);

    let mut h_count = 0u8;
    let mut crossed: Vec<(f64, Point2, EdgeIndex, Option<Member>)> = Vec::new();
    for f in frame.members() {
        match segment_intersection(seg, old.edge_segment(f))? {
            Intersection::Empty => {}
            Intersection::Overlap(_) => degenerate = Some(Degeneracy::CollinearOverlap),
            Intersection::Point { endpoints, .. } if endpoints.any() => {
                degenerate.get_or_insert(Degeneracy::EndpointContact);
            }
            Intersection::Point { point, t, .. } => {
                let member = match f {
                    EdgeIndex::Vertical { j: fj, .. } if fj < j => Some(Member::Lower),
                    EdgeIndex::Vertical { j: fj, .. } if fj == j => Some(Member::Middle),
                    EdgeIndex::Vertical { .. } => Some(Member::Upper),
                    EdgeIndex::Horizontal { .. } => {
                        h_count += 1;
                        None
                    }
                };
                crossed.push((t, point, f, member));
            }
        }
    }
    crossed.sort_by(|x, y| x.0.total_cmp(&y.0));
    let members: Vec<Member> = crossed.iter().filter_map(|c| c.3).collect();
    let v_count = members.len() as u8;
    let points = crossed.iter().map(|c| (c.1, c.2)).collect();

    let side = if a.quadrant.is_right() { Side::R } else { Side::L };
    if let Some(reason) = degenerate {
        if strict {
            return Err(ClassifyError::DegenerateEdge { edge, reason });
        }
        return Ok(EdgeFrameClass {
            edge,
            h_count,
            v_count,
            group: None,
            label: DEGENERATE_LABEL.to_string(),
            side,
            a_region: a.quadrant,
            b_region: b.quadrant,
            points,
            degenerate,
        });
    }

    let group = group_from_counts(h_count, v_count)?;
    if group != Group::from_regions(a.quadrant, b.quadrant) {
        return Err(ClassifyError::InvalidCombination { h: h_count, v: v_count });
    }
    let has = |m: Member| members.contains(&m);
    let tb = if a.quadrant.is_up() { "t" } else { "b" };
    let label = match (h_count, v_count) {
        (0, 0) => "H0V0".to_string(),
        (0, 1) => "H0V1".to_string(),
        (1, 0) => format!("H1V0{tb}"),
        (1, 1) => format!("H1V1{}{tb}", if has(Member::Middle) { "A" } else { "B" }),
        (1, 2) => format!("H1V2{tb}"),
        (2, 0) => "H2V0".to_string(),
        (2, 1) => match members[0] {
            Member::Lower => "H2V1A",
            Member::Middle => "H2V1B",
            Member::Upper => "H2V1C",
        }
        .to_string(),
        (2, 2) => match (has(Member::Lower), has(Member::Middle), has(Member::Upper)) {
            (true, true, false) => "H2V2A",
            (false, true, true) => "H2V2B",
            // lower and upper members around a bulging middle member; not
            // one of the 17 catalogue shapes
            _ => "H2V2C",
        }
        .to_string(),
        _ => "H2V3".to_string(),
    };
    Ok(EdgeFrameClass {
        edge,
        h_count,
        v_count,
        group: Some(group),
        label,
        side,
        a_region: a.quadrant,
        b_region: b.quadrant,
        points,
        degenerate: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundarySide {
    Upper,
    Lower,
}

/// Where the new horizontal face through a vertex meets the old vertical
/// curve of the frame.
#[derive(Debug, Clone, PartialEq)]
pub struct SwapBoundaryClass {
    pub vertex: (usize, usize),
    pub side: BoundarySide,
    pub region: Quadrant,
    pub v1: Point2,
    pub v2: Option<Point2>,
    /// 1 or 2 crossings with the frame.
    pub count: u8,
    pub degenerate: bool,
}

/// Classify the upper or lower end of the swap region along vertical edge
/// column `i`, at vertex `(i, j)`.
pub fn classify_swap_boundary(
    old: &StructuredQuadMesh,
    new: &StructuredQuadMesh,
    vertex: (usize, usize),
    side: BoundarySide,
) -> Result<SwapBoundaryClass, ClassifyError> {
    let (i, j) = vertex;
    let q = new.vertex(i, j);
    let assigned = assign_vertex(q, old, vertex)?;
    let region = assigned.quadrant;
    let mut degenerate = assigned.on_boundary;

    // the new horizontal face leaving Q towards the old curve x_i
    let face = if region.is_right() {
        i.checked_sub(1).map(|k| EdgeIndex::Horizontal { i: k, j })
    } else {
        (i + 1 < new.m()).then_some(EdgeIndex::Horizontal { i, j })
    }
    .ok_or(ClassifyError::MissingIntersection(vertex))?;
    let face_seg = new.edge_segment(face);

    let members = [j.checked_sub(1), (j + 1 < old.n()).then_some(j)];
    let mut v1 = None;
    for k in members.into_iter().flatten() {
        match segment_intersection(face_seg, old.edge_segment(EdgeIndex::Vertical { i, j: k }))? {
            Intersection::Empty => {}
            Intersection::Point { point, endpoints, .. } => {
                degenerate |= endpoints.any();
                v1 = Some(point);
                break;
            }
            Intersection::Overlap(s) => {
                degenerate = true;
                v1 = Some(s.a);
                break;
            }
        }
    }
    let v1 = v1.ok_or(ClassifyError::MissingIntersection(vertex))?;

    let mut v2 = None;
    if q != v1 {
        let reach = Segment::new(q, v1);
        for k in [i.checked_sub(1), (i + 1 < old.m()).then_some(i)].into_iter().flatten() {
            match segment_intersection(reach, old.edge_segment(EdgeIndex::Horizontal { i: k, j }))? {
                Intersection::Empty => {}
                Intersection::Point { point, endpoints, .. } => {
                    degenerate |= endpoints.any();
                    if !endpoints.any() {
                        v2 = Some(point);
                    }
                }
                Intersection::Overlap(_) => degenerate = true,
            }
        }
    }
    Ok(SwapBoundaryClass {
        vertex,
        side,
        region,
        v1,
        v2,
        count: 1 + v2.is_some() as u8,
        degenerate,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwapRegionClass {
    pub edge: EdgeIndex,
    pub group: Group,
    pub upper: SwapBoundaryClass,
    pub lower: SwapBoundaryClass,
}

impl SwapRegionClass {
    pub fn degenerate(&self) -> bool {
        self.upper.degenerate || self.lower.degenerate
    }

    /// Leaf identifier `A-B-group-U#S#`.
    pub fn branch_path(&self) -> String {
        format!(
            "{}-{}-{}-U{}S{}",
            self.upper.region,
            self.lower.region,
            self.group.abbrev(),
            self.upper.count,
            self.lower.count
        )
    }
}

fn classify_swap_region_vertical(
    old: &StructuredQuadMesh,
    new: &StructuredQuadMesh,
    i: usize,
    j: usize,
) -> Result<SwapRegionClass, ClassifyError> {
    let upper = classify_swap_boundary(old, new, (i, j + 1), BoundarySide::Upper)?;
    let lower = classify_swap_boundary(old, new, (i, j), BoundarySide::Lower)?;
    Ok(SwapRegionClass {
        edge: EdgeIndex::Vertical { i, j },
        group: Group::from_regions(upper.region, lower.region),
        upper,
        lower,
    })
}

/// Tallies of edge-frame labels and swap-region branch paths.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Census {
    pub labels: BTreeMap<String, usize>,
    pub branch_paths: BTreeMap<String, usize>,
    pub classified: usize,
    pub degenerate: usize,
    pub invalid: usize,
}

impl Census {
    pub fn non_degenerate_labels(&self) -> impl Iterator<Item = (&String, &usize)> {
        self.labels.iter().filter(|(l, _)| l.as_str() != DEGENERATE_LABEL)
    }

    /// Labels observed outside the 34-label catalogue.
    pub fn unknown_labels(&self) -> Vec<String> {
        let known = concrete_labels();
        self.non_degenerate_labels()
            .map(|(l, _)| l.clone())
            .filter(|l| !known.contains(l))
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("label,count\n");
        for (l, c) in &self.labels {
            out.push_str(&format!("{l},{c}\n"));
        }
        out
    }

    pub fn branch_paths_csv(&self) -> String {
        let mut out = String::from("branch_path,count\n");
        for (l, c) in &self.branch_paths {
            out.push_str(&format!("{l},{c}\n"));
        }
        out
    }
}

fn census_vertical(
    old: &StructuredQuadMesh,
    new: &StructuredQuadMesh,
    census: &mut Census,
    strict: bool,
) -> Result<(), ClassifyError> {
    for j in 1..old.n().saturating_sub(2) {
        for i in 1..old.m() - 1 {
            census.classified += 1;
            match classify_vertical(old, new, i, j, strict) {
                Ok(c) => {
                    if c.degenerate.is_some() {
                        census.degenerate += 1;
                    }
                    *census.labels.entry(c.concrete_label()).or_default() += 1;
                }
                Err(e) if strict => return Err(e),
                Err(_) => census.invalid += 1,
            }
            if let Ok(s) = classify_swap_region_vertical(old, new, i, j) {
                if !s.degenerate() {
                    *census.branch_paths.entry(s.branch_path()).or_default() += 1;
                }
            }
        }
    }
    Ok(())
}

/// Classify every new edge whose endpoints are both interior vertices, in
/// both sweep directions.
pub fn case_census(old: &StructuredQuadMesh, new: &StructuredQuadMesh) -> Census {
    let mut census = Census::default();
    let _ = census_vertical(old, new, &mut census, false);
    let _ = census_vertical(&old.transposed(), &new.transposed(), &mut census, false);
    census
}

/// As [`case_census`], but the first degenerate or invalid edge is an error.
pub fn case_census_strict(old: &StructuredQuadMesh, new: &StructuredQuadMesh) -> Result<Census, ClassifyError> {
    let mut census = Census::default();
    census_vertical(old, new, &mut census, true)?;
    census_vertical(&old.transposed(), &new.transposed(), &mut census, true)?;
    Ok(census)
}
