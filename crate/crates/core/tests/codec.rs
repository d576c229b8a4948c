use evoca_core::reference;
use evoca_core::RuleTable;
use proptest::prelude::*;

#[test]
fn reference_rules_round_trip() {
    for r in &reference::TABLE {
        assert_eq!(RuleTable::parse_hex(r.hex).unwrap().to_hex(), r.hex);
    }
    let cm = "0504058705000F77037755837BFFB77F";
    assert_eq!(RuleTable::parse_hex(cm).unwrap().to_hex(), cm);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn format_then_parse_is_identity(bits in any::<u128>()) {
        let r = RuleTable::from_bits(bits);
        prop_assert_eq!(RuleTable::parse_hex(&r.to_hex()).unwrap(), r);
    }

    #[test]
    fn parse_then_format_uppercases(s in "[0-9a-fA-F]{32}") {
        prop_assert_eq!(RuleTable::parse_hex(&s).unwrap().to_hex(), s.to_ascii_uppercase());
    }

    #[test]
    fn wrong_lengths_rejected(s in "[0-9A-F]{0,31}|[0-9A-F]{33,40}") {
        prop_assert!(RuleTable::parse_hex(&s).is_err());
    }
}
