//! Graphviz DOT export.

use std::collections::HashMap;
use std::fmt::Write;

use crate::graph::{SimpleDigraph, UserId};
use crate::roles::{Role, RoleAssignment};

fn quote(id: &str) -> String {
    let mut out = String::with_capacity(id.len() + 2);
    out.push('"');
    for c in id.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => {}
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// `digraph` with every node declared (role-assigned nodes carry a `role`
/// attribute) followed by the arcs, both in ascending order.
pub fn export_dot(d: &SimpleDigraph, assignments: &[RoleAssignment]) -> String {
    let role_of: HashMap<&UserId, Role> = assignments.iter().map(|a| (&a.user, a.role)).collect();
    let mut out = String::from("digraph \"netroles\" {\n");
    for user in d.nodes() {
        match role_of.get(user) {
            Some(role) => {
                let _ = writeln!(
                    out,
                    "  {} [role={}];",
                    quote(user.as_str()),
                    quote(role.as_str())
                );
            }
            None => {
                let _ = writeln!(out, "  {};", quote(user.as_str()));
            }
        }
    }
    for (s, t) in d.arcs() {
        let _ = writeln!(out, "  {} -> {};", quote(s.as_str()), quote(t.as_str()));
    }
    out.push_str("}\n");
    out
}
