use super::{handle_addition, standardize_diagonals, ConstructError, HandleGluing};
use crate::complex::{parse_text, Simplex, SimplicialComplex};

const WALKUP_P: &str = include_str!("../../../../data/walkup_P.facets");
const M6_16: &str = include_str!("../../../../data/M6_16.facets");

pub const DATASET_NAMES: [&str; 4] = ["walkup_P", "walkup_M3", "M6_16", "M6_16_std"];

/// Bundled complexes:
///
/// * `walkup_P`: the 9 facets of a stacked 4-polytope on 13 vertices;
/// * `walkup_M3`: `∂P` with `⟨1,2,3,4⟩` and `⟨10,11,12,13⟩` identified via `i ↦ i+9`;
/// * `M6_16`: the 240 facets of the 16-vertex 6-manifold, labels as published;
/// * `M6_16_std`: the same complex relabeled so its diagonals are `(2i−1, 2i)`.
pub fn dataset(name: &str) -> Result<SimplicialComplex, ConstructError> {
    match name {
        "walkup_P" => Ok(parse_text(WALKUP_P)?),
        "walkup_M3" => {
            let p = dataset("walkup_P")?;
            let boundary = p.boundary()?;
            let gluing = HandleGluing {
                facet1: Simplex::new(vec![1, 2, 3, 4])?,
                facet2: Simplex::new(vec![10, 11, 12, 13])?,
                pairing: (1..=4).map(|i| (i, i + 9)).collect(),
            };
            handle_addition(&boundary, &gluing)
        }
        "M6_16" => Ok(parse_text(M6_16)?),
        "M6_16_std" => standardize_diagonals(&dataset("M6_16")?)
            .ok_or_else(|| ConstructError::Validation("missing edges of M6_16 are not a perfect matching".into())),
        other => Err(ConstructError::UnknownDataset(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_datasets_load() {
        let p = dataset("walkup_P").unwrap();
        assert_eq!(p.f_vector().0, vec![13, 42, 58, 37, 9]);
        assert_eq!(p.boundary().unwrap().f_vector().0, vec![13, 42, 58, 29]);
        let m3 = dataset("walkup_M3").unwrap();
        assert_eq!(m3.f_vector().0, vec![9, 36, 54, 27]);
        assert!(m3.is_k_neighborly(2));
        let m6 = dataset("M6_16").unwrap();
        assert_eq!(m6.facets().len(), 240);
        assert_eq!(m6.facets()[0].vertices(), &[1, 2, 3, 4, 7, 12, 14]);
        assert!(matches!(dataset("nope"), Err(ConstructError::UnknownDataset(_))));
    }
}
