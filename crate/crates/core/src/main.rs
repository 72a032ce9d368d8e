use std::io;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

fn main() {
    let interrupt = Arc::new(AtomicBool::new(false));
    let flag = Arc::clone(&interrupt);
    if let Err(e) = ctrlc::set_handler(move || flag.store(true, Ordering::SeqCst)) {
        eprintln!("warning: cannot install interrupt handler: {e}");
    }
    let code = bailey_zeta::cli::run(std::env::args_os(), &mut io::stdout(), &mut io::stderr(), &interrupt);
    std::process::exit(code);
}
