pub fn dispatch_env() -> i32 { 0 }
