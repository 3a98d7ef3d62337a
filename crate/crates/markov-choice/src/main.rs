fn main() {
    // die quietly instead of panicking when the consumer closes the pipe
    // early (msc ... | head)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(markov_choice::cli::cli_run(std::env::args_os()));
}
