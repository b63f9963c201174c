use serde::{Deserialize, Serialize};

/// One attack candidate: non-edge IDs to add and edge IDs to delete.
///
/// Gene lists are kept sorted, so equal gene sets compare (and hash) equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Chromosome {
    add: Vec<usize>,
    del: Vec<usize>,
}

impl Chromosome {
    pub fn new(mut add: Vec<usize>, mut del: Vec<usize>) -> Self {
        add.sort_unstable();
        del.sort_unstable();
        Chromosome { add, del }
    }

    pub fn add_genes(&self) -> &[usize] {
        &self.add
    }

    pub fn del_genes(&self) -> &[usize] {
        &self.del
    }

    /// Budget β: the number of added links.
    pub fn budget(&self) -> usize {
        self.add.len()
    }
}
