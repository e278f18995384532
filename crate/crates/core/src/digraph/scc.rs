use super::Digraph;

/// Strong components by an iterative Tarjan sweep. Each component is sorted
/// and components are ordered by their smallest vertex.
pub fn strong_components(d: &Digraph) -> Vec<Vec<usize>> {
    let n = d.vertex_count();
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut comps = Vec::new();
    // (vertex, position in its out-list)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&(v, pos)) = call.last() {
            let outs = d.out_neighbors(v);
            if pos < outs.len() {
                let w = outs[pos];
                call.last_mut().expect("non-empty").1 += 1;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                comps.push(comp);
            }
        }
    }
    comps.sort_unstable_by_key(|c| c[0]);
    comps
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_is_one_component() {
        let d = Digraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(strong_components(&d), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn single_arc_gives_singletons() {
        let d = Digraph::from_edges(2, [(0, 1)]).unwrap();
        assert_eq!(strong_components(&d), vec![vec![0], vec![1]]);
    }

    #[test]
    fn two_cycles_joined_one_way() {
        let d = Digraph::from_edges(5, [(0, 1), (1, 0), (1, 2), (2, 3), (3, 4), (4, 2)]).unwrap();
        assert_eq!(strong_components(&d), vec![vec![0, 1], vec![2, 3, 4]]);
    }

    #[test]
    fn long_path_does_not_recurse() {
        let n = 200_000;
        let d = Digraph::from_edges(n, (0..n - 1).map(|i| (i, i + 1)).chain([(n - 1, 0)])).unwrap();
        assert_eq!(strong_components(&d).len(), 1);
    }
}
