//! Kept in its own binary: the budget is process-wide and would leak into
//! tests running in parallel.

use std::ffi::CString;
use std::ptr;

use posetpack_ffi::*;

#[test]
fn budget_errors_map_to_their_code() {
    unsafe {
        let mut cert = ptr::null_mut();
        let mut plan = ptr::null_mut();
        let name = CString::new("V").unwrap();
        let mut v = ptr::null_mut();
        assert_eq!(pp_poset_standard(name.as_ptr(), &mut v), PpStatus::Ok);
        assert_eq!(pp_minimal_closure(v, false, 0, &mut cert), PpStatus::Ok);
        assert_eq!(pp_plan_build(cert, 16, 1, &mut plan), PpStatus::Ok);
        pp_set_budget(10);
        let status = pp_plan_verify(plan);
        pp_set_budget(0);
        assert_eq!(status, PpStatus::BudgetExceeded);
        pp_plan_free(plan);
        pp_certificate_free(cert);
        pp_poset_free(v);
    }
}
