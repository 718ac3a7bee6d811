//! Example theories shipped with the library.

pub const ITREV: &str = include_str!("../theories/itrev.thy");
pub const REV_REV: &str = include_str!("../theories/rev_rev.thy");
pub const NAT_ADD: &str = include_str!("../theories/nat_add.thy");
pub const NONTHM: &str = include_str!("../theories/nonthm.thy");

/// `(file name, source)` of every bundled theory.
pub const ALL: [(&str, &str); 4] = [("itrev.thy", ITREV), ("rev_rev.thy", REV_REV), ("nat_add.thy", NAT_ADD), ("nonthm.thy", NONTHM)];

pub fn get(name: &str) -> Option<&'static str> {
    let name = name.strip_suffix(".thy").unwrap_or(name);
    ALL.iter().find(|(n, _)| n.strip_suffix(".thy") == Some(name)).map(|(_, s)| *s)
}
