//! Cross-checks for `gcdims` that combine several modules.

pub mod properties;

#[cfg(test)]
mod tests {
    use super::properties;

    #[test]
    fn test_ring_axioms() {
        properties::prop_ring_axioms().unwrap();
    }

    #[test]
    fn test_series_ring_laws() {
        properties::prop_series_ring().unwrap();
    }

    #[test]
    fn test_series_round_trips() {
        properties::prop_series_round_trips().unwrap();
    }

    #[test]
    fn test_canonicalize_invariance() {
        properties::prop_canonicalize().unwrap();
    }

    #[test]
    fn test_connected_round_trips() {
        properties::prop_connected_round_trips().unwrap();
    }

    #[test]
    fn test_backend_agreement() {
        properties::prop_backend_agreement().unwrap();
    }
}
