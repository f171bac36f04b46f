//! Algebra tiling patterns as rooted planar maps.
//!
//! A centered pattern is an arrangement of straight strands in a disk: every
//! internal vertex is a 4-valent crossing of a horizontal and a vertical
//! strand, and every half-edge carries a compass direction (N=0, E=1, S=2,
//! W=3, increasing clockwise). The corner clockwise after direction `d` is
//! labelled `d`, so labels increase clockwise around every vertex and across
//! an edge with the face on the right. Leaves sit on the boundary circle in
//! counterclockwise order with leaf 0 the root; the boundary face between
//! leaf `i-1` and leaf `i` reads the `i`-th chord.
//!
//! Given a chord sequence the leaf directions are forced, so a centered
//! pattern is determined by a perfect matching of the leaves into strands.
//! Extended patterns add 2-valent vertices on the root edge.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::{self, Write as _};

use crate::algebra::{label_mod, next_label, Basic, Chord, Monomial};

/// A planar map given by a rotation system. Dart `2k` runs from the first to
/// the second endpoint of edge `k` and dart `2k+1` is its reverse. Leaves are
/// the degree-one vertices listed in `boundary` in counterclockwise order;
/// `boundary[0]` is the root. The boundary circle is implicit: consecutive
/// leaves are joined by an arc of the circle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarMap {
    tail: Vec<usize>,
    rotation: Vec<Vec<usize>>,
    position: Vec<usize>,
    boundary: Vec<usize>,
    leaf_slot: Vec<Option<usize>>,
}

/// A face of a planar map, traced with the face on the left. `arc` is the
/// index `i` of the boundary arc from leaf `i` to leaf `i+1` when the face is
/// a boundary face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub darts: Vec<usize>,
    pub arc: Option<usize>,
    pub arc_count: usize,
}

impl PlanarMap {
    /// Build a map from edges and per-vertex counterclockwise dart lists.
    pub fn new(
        vertex_count: usize,
        edges: &[(usize, usize)],
        rotation: Vec<Vec<usize>>,
        boundary: Vec<usize>,
    ) -> Result<PlanarMap, String> {
        let mut tail = Vec::with_capacity(edges.len() * 2);
        for &(u, v) in edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(format!("edge ({u},{v}) refers to a missing vertex"));
            }
            tail.push(u);
            tail.push(v);
        }
        if rotation.len() != vertex_count {
            return Err("rotation system has the wrong number of vertices".into());
        }
        let mut position = vec![usize::MAX; tail.len()];
        for (v, darts) in rotation.iter().enumerate() {
            for (k, &d) in darts.iter().enumerate() {
                if d >= tail.len() || tail[d] != v || position[d] != usize::MAX {
                    return Err(format!("dart {d} misplaced in the rotation of vertex {v}"));
                }
                position[d] = k;
            }
        }
        if position.iter().any(|&p| p == usize::MAX) {
            return Err("some dart is missing from the rotation system".into());
        }
        let mut leaf_slot = vec![None; vertex_count];
        for (i, &v) in boundary.iter().enumerate() {
            if v >= vertex_count || rotation[v].len() != 1 || leaf_slot[v].is_some() {
                return Err(format!("boundary vertex {v} is not a distinct leaf"));
            }
            leaf_slot[v] = Some(i);
        }
        Ok(PlanarMap { tail, rotation, position, boundary, leaf_slot })
    }

    pub fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn dart_count(&self) -> usize {
        self.tail.len()
    }

    pub fn edge_count(&self) -> usize {
        self.tail.len() / 2
    }

    pub fn tail(&self, d: usize) -> usize {
        self.tail[d]
    }

    pub fn head(&self, d: usize) -> usize {
        self.tail[d ^ 1]
    }

    pub fn twin(d: usize) -> usize {
        d ^ 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    pub fn root(&self) -> usize {
        self.boundary[0]
    }

    pub fn leaf_slot(&self, v: usize) -> Option<usize> {
        self.leaf_slot[v]
    }

    pub fn ccw_next(&self, d: usize) -> usize {
        let rot = &self.rotation[self.tail[d]];
        rot[(self.position[d] + 1) % rot.len()]
    }

    pub fn cw_next(&self, d: usize) -> usize {
        let rot = &self.rotation[self.tail[d]];
        rot[(self.position[d] + rot.len() - 1) % rot.len()]
    }

    /// The dart following `d` along the face on its left.
    fn face_successor(&self, d: usize) -> (usize, Option<usize>) {
        let v = self.head(d);
        match self.leaf_slot[v] {
            Some(i) => {
                let next_leaf = self.boundary[(i + 1) % self.boundary.len()];
                (self.rotation[next_leaf][0], Some(i))
            }
            None => (self.cw_next(d ^ 1), None),
        }
    }

    /// All faces inside the disk.
    pub fn faces(&self) -> Vec<Face> {
        let mut seen = vec![false; self.tail.len()];
        let mut faces = Vec::new();
        for start in 0..self.tail.len() {
            if seen[start] {
                continue;
            }
            let mut darts = Vec::new();
            let mut arc = None;
            let mut arc_count = 0;
            let mut resume = 0;
            let mut d = start;
            loop {
                seen[d] = true;
                darts.push(d);
                let (next, crossed) = self.face_successor(d);
                if let Some(i) = crossed {
                    arc = Some(i);
                    arc_count += 1;
                    resume = darts.len();
                }
                d = next;
                if d == start {
                    break;
                }
            }
            // boundary faces start with the dart leaving the later leaf
            let len = darts.len();
            darts.rotate_left(resume % len);
            faces.push(Face { darts, arc, arc_count });
        }
        faces
    }

    /// Connectivity of the graph, ignoring the boundary circle.
    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &d in &self.rotation[v] {
                let w = self.head(d);
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Euler characteristic check on the sphere obtained by adding the
    /// boundary circle and the outer region.
    pub fn euler_ok(&self) -> bool {
        let v = self.vertex_count() as i64;
        let e = (self.edge_count() + self.boundary.len()) as i64;
        let f = self.faces().len() as i64 + 1;
        v - e + f == 2
    }

    /// First Betti number of the graph (without the boundary circle).
    pub fn cycle_rank(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.vertex_count()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nxt = p[y];
                p[y] = r;
                y = nxt;
            }
            r
        }
        let mut components = self.vertex_count();
        for k in 0..self.edge_count() {
            let (a, b) = (find(&mut parent, self.tail[2 * k]), find(&mut parent, self.tail[2 * k + 1]));
            if a != b {
                parent[a] = b;
                components -= 1;
            }
        }
        self.edge_count() + components - self.vertex_count()
    }
}

/// Which kind of algebra tiling pattern a labelled map represents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PatternKind {
    /// No 2-valent vertices; the output is a power of U times an idempotent.
    Centered,
    /// 2-valent vertices on the root edge carry the trailing labels of the
    /// last chord; the output is the chord they spell.
    LeftExtended,
    /// 2-valent vertices on the root edge carry the leading labels of the
    /// first chord.
    RightExtended,
}

/// A planar map together with a label (or none) on the corner
/// counterclockwise after each dart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledPattern {
    map: PlanarMap,
    labels: Vec<Option<u8>>,
    kind: PatternKind,
}

/// Diagnostic for a pattern that fails validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvalidPattern(pub String);

impl fmt::Display for InvalidPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid pattern: {}", self.0)
    }
}

impl std::error::Error for InvalidPattern {}

fn invalid<T>(msg: impl Into<String>) -> Result<T, InvalidPattern> {
    Err(InvalidPattern(msg.into()))
}

impl LabeledPattern {
    pub fn new(map: PlanarMap, labels: Vec<Option<u8>>, kind: PatternKind) -> LabeledPattern {
        LabeledPattern { map, labels, kind }
    }

    pub fn map(&self) -> &PlanarMap {
        &self.map
    }

    pub fn kind(&self) -> PatternKind {
        self.kind
    }

    pub fn corner_label(&self, d: usize) -> Option<u8> {
        self.labels[d]
    }

    /// Number of 4-valent vertices.
    pub fn four_valent_count(&self) -> usize {
        (0..self.map.vertex_count()).filter(|&v| self.map.degree(v) == 4).count()
    }

    /// Number of 2-valent vertices.
    pub fn two_valent_count(&self) -> usize {
        (0..self.map.vertex_count()).filter(|&v| self.map.degree(v) == 2).count()
    }

    /// Labels read along a boundary face, oriented from the earlier leaf.
    fn face_reading(&self, face: &Face) -> Vec<(usize, u8)> {
        let mut out = Vec::new();
        for &d in &face.darts {
            let v = self.map.tail(d);
            if self.map.leaf_slot(v).is_some() {
                continue;
            }
            if let Some(l) = self.labels[d] {
                out.push((v, l));
            }
        }
        out.reverse();
        out
    }

    fn chord_of_reading(reading: &[(usize, u8)]) -> Result<Chord, InvalidPattern> {
        let Some(&(_, first)) = reading.first() else {
            return invalid("boundary face without labelled corners");
        };
        for w in reading.windows(2) {
            if w[1].1 != next_label(w[0].1) {
                return invalid("boundary face labels are not a consecutive increasing run");
            }
        }
        Ok(Chord::new(first, reading.len() as u32).expect("label in range"))
    }

    /// Full validity check; returns a diagnostic on failure.
    pub fn validate(&self) -> Result<(), InvalidPattern> {
        let map = &self.map;
        if self.labels.len() != map.dart_count() {
            return invalid("label table does not match the darts");
        }
        if map.boundary().len() < 2 {
            return invalid("fewer than two leaves");
        }
        if !map.is_connected() {
            return invalid("graph is not connected");
        }
        if !map.euler_ok() {
            return invalid("Euler characteristic check failed");
        }
        // vertex degrees and the 2-valent chain on the root edge
        let mut chain = Vec::new();
        let mut d = map.rotation(map.root())[0];
        while map.degree(map.head(d)) == 2 {
            let v = map.head(d);
            chain.push(v);
            let back = PlanarMap::twin(d);
            d = map.ccw_next(back);
        }
        let chain_set: BTreeSet<usize> = chain.iter().copied().collect();
        for v in 0..map.vertex_count() {
            match map.degree(v) {
                1 => {
                    if map.leaf_slot(v).is_none() {
                        return invalid(format!("degree-one vertex {v} is not on the boundary"));
                    }
                }
                2 => {
                    if !chain_set.contains(&v) {
                        return invalid(format!("2-valent vertex {v} is off the root edge"));
                    }
                }
                4 => {}
                k => return invalid(format!("vertex {v} has valence {k}")),
            }
        }
        match (self.kind, chain.is_empty()) {
            (PatternKind::Centered, false) => return invalid("centered pattern with 2-valent vertices"),
            (PatternKind::LeftExtended | PatternKind::RightExtended, true) => {
                return invalid("extended pattern without 2-valent vertices")
            }
            _ => {}
        }
        // corner labels at each vertex
        for v in 0..map.vertex_count() {
            let rot = map.rotation(v);
            match rot.len() {
                1 => {
                    if self.labels[rot[0]].is_some() {
                        return invalid(format!("leaf {v} carries a corner label"));
                    }
                }
                2 => {
                    let labelled = rot.iter().filter(|&&d| self.labels[d].is_some()).count();
                    if labelled != 1 {
                        return invalid(format!("2-valent vertex {v} must carry exactly one label"));
                    }
                }
                _ => {
                    for (k, &d) in rot.iter().enumerate() {
                        let Some(l) = self.labels[d] else {
                            return invalid(format!("unlabelled corner at vertex {v}"));
                        };
                        let next = self.labels[rot[(k + 1) % 4]].unwrap_or(0);
                        if next != label_mod(l as i64 - 1) {
                            return invalid(format!("corners at vertex {v} are not a cyclic reordering"));
                        }
                    }
                }
            }
        }
        // propagation across edges: with the face on the right, labels go up by one
        for d in 0..map.dart_count() {
            let (u, v) = (map.tail(d), map.head(d));
            if map.leaf_slot(u).is_some() || map.leaf_slot(v).is_some() {
                continue;
            }
            let right_at_tail = self.labels[map.cw_next(d)];
            let right_at_head = self.labels[PlanarMap::twin(d)];
            if let (Some(a), Some(b)) = (right_at_tail, right_at_head) {
                if b != next_label(a) {
                    return invalid(format!("label propagation fails along dart {d}"));
                }
            }
        }
        // faces
        let n = map.boundary().len();
        let mut arcs_seen = vec![false; n];
        for face in map.faces() {
            if face.arc_count > 1 {
                return invalid("a face meets the boundary in more than one arc");
            }
            match face.arc {
                None => {
                    let corners = face
                        .darts
                        .iter()
                        .filter(|&&d| map.degree(map.tail(d)) == 4)
                        .count();
                    let thin = face.darts.iter().any(|&d| map.degree(map.tail(d)) == 2);
                    if corners != 4 || thin {
                        return invalid("an internal face is not bounded by four edges");
                    }
                }
                Some(i) => {
                    arcs_seen[i] = true;
                    let reading = self.face_reading(&face);
                    Self::chord_of_reading(&reading)?;
                    let thin: Vec<_> = reading.iter().filter(|(v, _)| chain_set.contains(v)).collect();
                    let ok = match self.kind {
                        PatternKind::Centered => thin.is_empty(),
                        PatternKind::LeftExtended => thin.is_empty() || i == n - 1,
                        PatternKind::RightExtended => thin.is_empty() || i == 0,
                    };
                    if !ok {
                        return invalid("2-valent labels sit on the wrong side of the root edge");
                    }
                }
            }
        }
        if arcs_seen.iter().any(|s| !s) {
            return invalid("some boundary arc has no face");
        }
        Ok(())
    }

    /// Chords read along the boundary faces, starting after the root.
    pub fn chord_sequence(&self) -> Result<Vec<Chord>, InvalidPattern> {
        let n = self.map.boundary().len();
        let mut seq = vec![None; n];
        for face in self.map.faces() {
            if let Some(i) = face.arc {
                let chord = Self::chord_of_reading(&self.face_reading(&face))?;
                seq[i] = Some(chord);
            }
        }
        seq.into_iter()
            .map(|c| c.ok_or_else(|| InvalidPattern("missing boundary face".into())))
            .collect()
    }

    /// Number of internal faces.
    pub fn weight(&self) -> usize {
        self.map.faces().iter().filter(|f| f.arc.is_none()).count()
    }

    /// The output `U^d` times the left idempotent (centered) or the chord
    /// spelled by the 2-valent vertices (extended), `d` the number of
    /// 4-valent vertices.
    pub fn output(&self) -> Result<Monomial, InvalidPattern> {
        let d = self.four_valent_count() as u32;
        match self.kind {
            PatternKind::Centered => {
                let seq = self.chord_sequence()?;
                Ok(Monomial::new(d, 0, Basic::Idem(seq[0].left_idempotent())))
            }
            PatternKind::LeftExtended | PatternKind::RightExtended => {
                let mut labels = Vec::new();
                for face in self.map.faces() {
                    if face.arc.is_some() {
                        for (v, l) in self.face_reading(&face) {
                            if self.map.degree(v) == 2 {
                                labels.push(l);
                            }
                        }
                    }
                }
                let chord = Self::chord_of_reading(
                    &labels.into_iter().map(|l| (0, l)).collect::<Vec<_>>(),
                )?;
                Ok(Monomial::new(d, 0, chord))
            }
        }
    }

    /// Root-anchored breadth-first encoding of the rotation system and labels.
    pub fn canonical_form(&self) -> Vec<u8> {
        let map = &self.map;
        let mut out = vec![match self.kind {
            PatternKind::Centered => 0u8,
            PatternKind::LeftExtended => 1,
            PatternKind::RightExtended => 2,
        }];
        let mut id = vec![u32::MAX; map.vertex_count()];
        let mut queue = VecDeque::new();
        let root = map.root();
        id[root] = 0;
        let mut next_id = 1u32;
        queue.push_back((root, map.rotation(root)[0]));
        while let Some((v, entry)) = queue.pop_front() {
            out.extend_from_slice(&(map.degree(v) as u32).to_le_bytes());
            let mut d = entry;
            for _ in 0..map.degree(v) {
                let w = map.head(d);
                if id[w] == u32::MAX {
                    id[w] = next_id;
                    next_id += 1;
                    queue.push_back((w, PlanarMap::twin(d)));
                }
                out.extend_from_slice(&id[w].to_le_bytes());
                out.push(self.labels[d].unwrap_or(0));
                d = map.ccw_next(d);
            }
        }
        out
    }

    /// Human-readable dump: one line per vertex with its rotation and labels.
    pub fn debug_text(&self) -> String {
        let map = &self.map;
        let mut s = String::new();
        let _ = writeln!(s, "kind {:?}", self.kind);
        let _ = writeln!(s, "boundary {:?}", map.boundary());
        for v in 0..map.vertex_count() {
            let _ = write!(s, "v{v}:");
            for &d in map.rotation(v) {
                match self.labels[d] {
                    Some(l) => {
                        let _ = write!(s, " ->v{}[{}]", map.head(d), l);
                    }
                    None => {
                        let _ = write!(s, " ->v{}[-]", map.head(d));
                    }
                }
            }
            s.push('\n');
        }
        s
    }

    /// Graphviz rendering with leaves drawn as boxes.
    pub fn to_dot(&self) -> String {
        let map = &self.map;
        let mut s = String::from("graph pattern {\n");
        for v in 0..map.vertex_count() {
            let shape = match (map.leaf_slot(v), map.degree(v)) {
                (Some(i), _) if i == 0 => "doublecircle".to_string(),
                (Some(_), _) => "box".to_string(),
                (None, 2) => "point".to_string(),
                _ => "circle".to_string(),
            };
            let label: String = map
                .rotation(v)
                .iter()
                .filter_map(|&d| self.labels[d])
                .map(|l| char::from(b'0' + l))
                .collect();
            let _ = writeln!(s, "  v{v} [shape={shape}, label=\"{label}\"];");
        }
        for k in 0..map.edge_count() {
            let _ = writeln!(s, "  v{} -- v{};", map.tail(2 * k), map.tail(2 * k + 1));
        }
        s.push_str("}\n");
        s
    }
}

/// Leaf directions forced by a chord sequence, or `None` when the boundary
/// data cannot close up into a centered pattern.
fn leaf_directions(seq: &[Chord]) -> Option<Vec<u8>> {
    let n = seq.len();
    if n < 4 || n % 2 == 1 {
        return None;
    }
    let total: u64 = seq.iter().map(|c| c.len() as u64).sum();
    if total != 2 * n as u64 - 4 {
        return None;
    }
    for i in 0..n {
        let (a, b) = (seq[i], seq[(i + 1) % n]);
        // a_{i+1} starts one label before the last label of a_i
        if b.start() != label_mod(a.last_label() as i64 - 1) {
            return None;
        }
    }
    Some(seq.iter().map(|c| ((c.start() + 1) % 4) as u8).collect())
}

fn interleave(a: (usize, usize), b: (usize, usize)) -> bool {
    let inside = |x: usize| a.0 < x && x < a.1;
    inside(b.0) != inside(b.1)
}

fn crossing_ok(dirs: &[u8], a: (usize, usize), b: (usize, usize)) -> bool {
    let mut pts = [a.0, a.1, b.0, b.1];
    pts.sort_unstable();
    (0..4).all(|k| {
        let (x, y) = (dirs[pts[k]], dirs[pts[(k + 1) % 4]]);
        (x + 4 - y) % 4 == 1
    })
}

fn matchings(dirs: &[u8]) -> Vec<Vec<(usize, usize)>> {
    fn rec(
        dirs: &[u8],
        used: &mut Vec<bool>,
        strands: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        let Some(i) = used.iter().position(|u| !u) else {
            out.push(strands.clone());
            return;
        };
        used[i] = true;
        for k in i + 1..dirs.len() {
            if used[k] || dirs[k] != (dirs[i] + 2) % 4 {
                continue;
            }
            let s = (i, k);
            let horizontal = dirs[i] % 2;
            let compatible = strands.iter().all(|&t| {
                if !interleave(s, t) {
                    true
                } else if dirs[t.0] % 2 == horizontal {
                    false
                } else {
                    crossing_ok(dirs, s, t)
                }
            });
            if !compatible {
                continue;
            }
            used[k] = true;
            strands.push(s);
            rec(dirs, used, strands, out);
            strands.pop();
            used[k] = false;
        }
        used[i] = false;
    }
    let mut out = Vec::new();
    rec(dirs, &mut vec![false; dirs.len()], &mut Vec::new(), &mut out);
    out
}

/// Root-edge decoration for extended patterns.
#[derive(Clone, Copy, Debug)]
enum Extension {
    None,
    /// `t` labels continuing the last chord.
    Left(u32),
    /// `t` labels leading into the first chord.
    Right(u32),
}

/// Build the labelled map of a strand arrangement. Returns `None` when the
/// arrangement is disconnected or its faces do not reproduce `seq`.
fn build_pattern(
    seq: &[Chord],
    dirs: &[u8],
    strands: &[(usize, usize)],
    ext: Extension,
) -> Option<LabeledPattern> {
    let n = dirs.len();
    // connectivity of the crossing graph of strands
    let m = strands.len();
    let mut comp: Vec<usize> = (0..m).collect();
    let mut crossings = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            if interleave(strands[a], strands[b]) {
                crossings.push((a, b));
                let (ca, cb) = (comp[a], comp[b]);
                if ca != cb {
                    for c in comp.iter_mut() {
                        if *c == cb {
                            *c = ca;
                        }
                    }
                }
            }
        }
    }
    if comp.iter().any(|&c| c != comp[0]) {
        return None;
    }
    // per strand, its crossings ordered from the first endpoint
    let mut along: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (k, &(a, b)) in crossings.iter().enumerate() {
        along[a].push(k);
        along[b].push(k);
    }
    for (s, list) in along.iter_mut().enumerate() {
        let (p, q) = strands[s];
        let key = |k: usize| {
            let (a, b) = crossings[k];
            let other = strands[if a == s { b } else { a }];
            if p < other.0 && other.0 < q {
                other.0
            } else {
                other.1
            }
        };
        list.sort_by_key(|&k| key(k));
    }
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut dart_dir: Vec<Option<u8>> = Vec::new();
    let crossing_vertex = |k: usize| n + k;
    let thin_count = match ext {
        Extension::None => 0,
        Extension::Left(t) | Extension::Right(t) => t as usize,
    };
    let thin_base = n + crossings.len();
    let vertex_count = thin_base + thin_count;
    let mut push_edge = |u: usize, v: usize, du: Option<u8>, dv: Option<u8>| {
        edges.push((u, v));
        dart_dir.push(du);
        dart_dir.push(dv);
    };
    for (s, &(p, q)) in strands.iter().enumerate() {
        let mut path: Vec<usize> = Vec::new();
        path.push(p);
        let root_side = p == 0 && thin_count > 0;
        if root_side {
            for k in (0..thin_count).rev() {
                path.push(thin_base + k);
            }
        }
        path.extend(along[s].iter().map(|&k| crossing_vertex(k)));
        path.push(q);
        for w in path.windows(2) {
            let du = if w[0] == p { None } else { Some(dirs[q]) };
            let dv = if w[1] == q { None } else { Some(dirs[p]) };
            push_edge(w[0], w[1], du, dv);
        }
    }
    let mut rotation: Vec<Vec<usize>> = vec![Vec::new(); vertex_count];
    for d in 0..dart_dir.len() {
        let (u, v) = edges[d / 2];
        rotation[if d % 2 == 0 { u } else { v }].push(d);
    }
    for (v, rot) in rotation.iter_mut().enumerate() {
        if v >= n && v < thin_base {
            rot.sort_by_key(|&d| (4 - dart_dir[d].expect("crossing dart has a direction")) % 4);
        }
    }
    let boundary: Vec<usize> = (0..n).collect();
    let map = PlanarMap::new(vertex_count, &edges, rotation, boundary).ok()?;
    let mut labels = vec![None; map.dart_count()];
    for d in 0..map.dart_count() {
        let v = map.tail(d);
        if v >= n && v < thin_base {
            labels[d] = Some(label_mod(dart_dir[d].unwrap() as i64 - 1));
        }
    }
    let kind = match ext {
        Extension::None => PatternKind::Centered,
        Extension::Left(_) => PatternKind::LeftExtended,
        Extension::Right(_) => PatternKind::RightExtended,
    };
    // 2-valent vertex k sits k+1 steps from the first crossing on the root strand
    for k in 0..thin_count {
        let v = thin_base + k;
        for &d in map.rotation(v) {
            let inward = dart_dir[d] == Some((dirs[0] + 2) % 4);
            let step = k as i64 + 1;
            labels[d] = match ext {
                Extension::Left(_) if inward => {
                    Some(label_mod(seq[n - 1].last_label() as i64 + step))
                }
                Extension::Right(_) if !inward => Some(label_mod(seq[0].start() as i64 - step)),
                _ => None,
            };
        }
    }
    let pattern = LabeledPattern::new(map, labels, kind);
    for face in pattern.map.faces() {
        match face.arc {
            None => {
                let corners = face.darts.iter().filter(|&&d| pattern.map.degree(pattern.map.tail(d)) == 4).count();
                if corners != 4 {
                    return None;
                }
            }
            Some(i) => {
                let reading = pattern.face_reading(&face);
                let chord = LabeledPattern::chord_of_reading(&reading).ok()?;
                let expected = seq[i];
                let expected = match ext {
                    Extension::Left(t) if i == n - 1 => expected.extend_n_back(t),
                    Extension::Right(t) if i == 0 => expected.extend_n_front(t),
                    _ => expected,
                };
                if chord != expected {
                    return None;
                }
            }
        }
    }
    Some(pattern)
}

trait ExtendN {
    fn extend_n_back(self, t: u32) -> Chord;
    fn extend_n_front(self, t: u32) -> Chord;
}

impl ExtendN for Chord {
    fn extend_n_back(self, t: u32) -> Chord {
        (0..t).fold(self, |c, _| c.extend_back())
    }

    fn extend_n_front(self, t: u32) -> Chord {
        (0..t).fold(self, |c, _| c.extend_front())
    }
}

/// Centered patterns whose boundary reads `seq`.
pub fn centered_patterns(seq: &[Chord]) -> Vec<LabeledPattern> {
    extended_by(seq, Extension::None)
}

fn extended_by(trimmed: &[Chord], ext: Extension) -> Vec<LabeledPattern> {
    let Some(dirs) = leaf_directions(trimmed) else {
        return Vec::new();
    };
    matchings(&dirs)
        .iter()
        .filter_map(|strands| build_pattern(trimmed, &dirs, strands, ext))
        .collect()
}

/// All centered and extended algebra tiling patterns with chord sequence
/// `seq`, of every weight, deduplicated by canonical form.
pub fn enumerate_patterns(seq: &[Chord]) -> Vec<LabeledPattern> {
    let n = seq.len();
    let mut found = centered_patterns(seq);
    if n >= 4 {
        for t in 1..seq[n - 1].len() {
            let mut trimmed = seq.to_vec();
            trimmed[n - 1] = seq[n - 1].split_back(t).expect("t < len").0;
            found.extend(extended_by(&trimmed, Extension::Left(t)));
        }
        for t in 1..seq[0].len() {
            let mut trimmed = seq.to_vec();
            trimmed[0] = seq[0].split_front(t).expect("t < len").1;
            found.extend(extended_by(&trimmed, Extension::Right(t)));
        }
    }
    let mut seen = BTreeSet::new();
    found.retain(|p| seen.insert(p.canonical_form()));
    found
}

/// Patterns of a single weight.
pub fn enumerate_algebra_patterns(seq: &[Chord], w: usize) -> Vec<LabeledPattern> {
    enumerate_patterns(seq).into_iter().filter(|p| p.weight() == w).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_chord_list;

    fn seq(s: &str) -> Vec<Chord> {
        parse_chord_list(s).unwrap()
    }

    #[test]
    fn single_vertex() {
        let s = seq("r2,r1,r4,r3");
        let ps = enumerate_patterns(&s);
        assert_eq!(ps.len(), 1);
        let p = &ps[0];
        p.validate().unwrap();
        assert_eq!(p.chord_sequence().unwrap(), s);
        assert_eq!(p.weight(), 0);
        assert_eq!(p.output().unwrap().to_string(), "U*i1");
    }

    #[test]
    fn duplicated_label_is_invalid() {
        let p = &enumerate_patterns(&seq("r2,r1,r4,r3"))[0];
        let mut labels = p.labels.clone();
        let d = (0..labels.len()).find(|&d| labels[d] == Some(1)).unwrap();
        labels[d] = Some(2);
        let broken = LabeledPattern::new(p.map.clone(), labels, p.kind);
        assert!(broken.validate().is_err());
    }

    #[test]
    fn odd_length_has_no_patterns() {
        assert!(enumerate_patterns(&seq("r4,r3,r2")).is_empty());
    }
}
