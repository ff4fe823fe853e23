/// Subsets of a class that keep at most two vertices from every clique of its
/// cover, ordered by size and then lexicographically by vertex id.
///
/// A forest contains at most two vertices of any clique, so no other subset
/// can survive as part of a solution.
pub fn local_selections(cover: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut acc: Vec<Vec<usize>> = vec![Vec::new()];
    for clique in cover {
        let mut clique = clique.clone();
        clique.sort_unstable();
        let mut picks: Vec<Vec<usize>> = vec![Vec::new()];
        for (i, &a) in clique.iter().enumerate() {
            picks.push(vec![a]);
            for &b in &clique[i + 1..] {
                picks.push(vec![a, b]);
            }
        }
        acc = acc
            .iter()
            .flat_map(|base| {
                picks.iter().map(move |p| {
                    let mut s = base.clone();
                    s.extend_from_slice(p);
                    s
                })
            })
            .collect();
    }
    for s in &mut acc {
        s.sort_unstable();
    }
    acc.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    acc
}

/// `prod (1 + |C| + |C|(|C|-1)/2)` over the cliques of a cover.
pub fn selection_count(cover: &[Vec<usize>]) -> usize {
    cover.iter().map(|c| 1 + c.len() + c.len() * c.len().saturating_sub(1) / 2).product()
}
