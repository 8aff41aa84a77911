use serde::{Deserialize, Serialize};

use super::{ComplexError, SimplicialComplex, Vertex};

/// JSON shape: `{"name": ..., "facets": [[...], ...]}` with `name` optional.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub facets: Vec<Vec<Vertex>>,
}

/// One facet per line, labels separated by whitespace; `#` starts a comment.
pub fn parse_text(input: &str) -> Result<SimplicialComplex, ComplexError> {
    let mut facets: Vec<Vec<Vertex>> = Vec::new();
    for (lineno, line) in input.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let facet = content
            .split_whitespace()
            .map(|tok| {
                tok.parse::<Vertex>().map_err(|_| ComplexError::Parse {
                    line: lineno + 1,
                    message: format!("not a vertex label: {tok:?}"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        facets.push(facet);
    }
    SimplicialComplex::from_facets(&facets).map_err(|e| match e {
        ComplexError::Empty => ComplexError::Parse { line: 0, message: "no facets".into() },
        other => other,
    })
}

pub fn parse_json(input: &str) -> Result<(SimplicialComplex, Option<String>), ComplexError> {
    let file: ComplexFile = serde_json::from_str(input).map_err(|e| ComplexError::Json(e.to_string()))?;
    Ok((SimplicialComplex::from_facets(&file.facets)?, file.name))
}

pub fn to_text(complex: &SimplicialComplex) -> String {
    let mut out = String::new();
    for f in complex.facets() {
        let line: Vec<String> = f.vertices().iter().map(|v| v.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn to_json(complex: &SimplicialComplex, name: Option<&str>) -> String {
    let file = ComplexFile { name: name.map(str::to_owned), facets: complex.facet_lists() };
    serde_json::to_string(&file).expect("facet lists serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn comments_and_errors() {
        let k = parse_text("# header\n1 2 3\n\n2 3 4 # trailing\n").unwrap();
        assert_eq!(k.facet_lists(), vec![vec![1, 2, 3], vec![2, 3, 4]]);
        match parse_text("1 2\n3 x\n") {
            Err(ComplexError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn json_shape() {
        let k = parse_text("1 2\n2 3\n").unwrap();
        assert_eq!(to_json(&k, Some("path")), r#"{"name":"path","facets":[[1,2],[2,3]]}"#);
        assert_eq!(to_json(&k, None), r#"{"facets":[[1,2],[2,3]]}"#);
    }

    proptest! {
        #[test]
        fn exports_round_trip(raw in prop::collection::vec(prop::collection::btree_set(1u32..12, 1..5), 1..12)) {
            let lists: Vec<Vec<u32>> = raw.into_iter().map(|s| s.into_iter().collect()).collect();
            let k = SimplicialComplex::from_facets(&lists).unwrap();
            let text = to_text(&k);
            prop_assert_eq!(to_text(&parse_text(&text).unwrap()), text);
            let json = to_json(&k, Some("x"));
            let (back, name) = parse_json(&json).unwrap();
            prop_assert_eq!(name.as_deref(), Some("x"));
            prop_assert_eq!(to_json(&back, Some("x")), json);
            prop_assert_eq!(back, k);
        }
    }
}
