use quadremap_web::{census, overlay, remap, MAX_NX};

#[test]
fn overlay_has_both_grids() {
    let v = overlay("random", 7, 3).unwrap();
    assert_eq!(v["old"]["vertices"].as_array().unwrap().len(), 49);
    assert_eq!(v["new"]["m"], 7);
    assert_eq!(v["a1_violations"], 0);
    assert_eq!(v["count_formula_applicable"], true);
}

#[test]
fn remap_conserves_and_colours_every_cell() {
    for method in ["fb", "cib"] {
        let v = remap("tensor", 11, 1, "franke", method).unwrap();
        assert_eq!(v["cells"].as_array().unwrap().len(), 100);
        assert!(v["conservation_residual"].as_f64().unwrap() <= 1e-12);
        assert_eq!(v["cells"][0]["quad"].as_array().unwrap().len(), 4);
    }
}

#[test]
fn census_matches_the_count_formula() {
    let v = census("random", 9, 2).unwrap();
    assert_eq!(v["polygon_count"], v["expected"]);
    assert_eq!(
        v["polygons"].as_array().unwrap().len() as u64,
        v["polygon_count"].as_u64().unwrap()
    );
    assert_eq!(v["strips_match"], true);
}

#[test]
fn bad_inputs_are_errors() {
    assert_eq!(overlay("hex", 7, 1).unwrap_err().code(), "invalid_value");
    assert_eq!(overlay("random", MAX_NX + 1, 1).unwrap_err().code(), "invalid_value");
    assert_eq!(
        remap("random", 7, 1, "gauss", "fb").unwrap_err().code(),
        "invalid_value"
    );
    assert_eq!(
        remap("random", 7, 1, "franke", "exact").unwrap_err().code(),
        "invalid_value"
    );
}
