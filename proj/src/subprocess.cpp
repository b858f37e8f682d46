#include "ossrecon/subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>

namespace ossrecon {

namespace {

void drain(int fd, std::string& sink) {
  char buf[8192];
  for (;;) {
    ssize_t n = ::read(fd, buf, sizeof(buf));
    if (n > 0) {
      sink.append(buf, static_cast<size_t>(n));
    } else if (n == 0 || (n < 0 && errno != EINTR)) {
      return;
    }
  }
}

}  // namespace

void check_deadline(Deadline deadline, const std::string& stage) {
  if (deadline && std::chrono::steady_clock::now() > *deadline)
    throw TimeoutError("timeout exceeded during " + stage);
}

CommandResult run_command(const std::vector<std::string>& argv,
                          const std::optional<std::filesystem::path>& cwd, Deadline deadline,
                          const std::vector<std::pair<std::string, std::string>>& extra_env) {
  CommandResult result;
  if (argv.empty()) {
    result.err = "empty argv";
    return result;
  }

  int out_pipe[2], err_pipe[2];
  if (::pipe(out_pipe) != 0) throw std::runtime_error("pipe() failed");
  if (::pipe(err_pipe) != 0) {
    ::close(out_pipe[0]);
    ::close(out_pipe[1]);
    throw std::runtime_error("pipe() failed");
  }

  pid_t pid = ::fork();
  if (pid < 0) {
    for (int fd : {out_pipe[0], out_pipe[1], err_pipe[0], err_pipe[1]}) ::close(fd);
    throw std::runtime_error("fork() failed");
  }

  if (pid == 0) {
    // Child: detach stdin, wire pipes, apply cwd/env, exec.
    int devnull = ::open("/dev/null", O_RDONLY);
    if (devnull >= 0) ::dup2(devnull, STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::dup2(err_pipe[1], STDERR_FILENO);
    for (int fd : {out_pipe[0], out_pipe[1], err_pipe[0], err_pipe[1]}) ::close(fd);
    if (cwd && ::chdir(cwd->c_str()) != 0) _exit(127);
    for (const auto& [k, v] : extra_env) ::setenv(k.c_str(), v.c_str(), 1);
    std::vector<char*> cargv;
    cargv.reserve(argv.size() + 1);
    for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
    cargv.push_back(nullptr);
    ::execvp(cargv[0], cargv.data());
    _exit(127);
  }

  ::close(out_pipe[1]);
  ::close(err_pipe[1]);

  struct pollfd fds[2] = {{out_pipe[0], POLLIN, 0}, {err_pipe[0], POLLIN, 0}};
  bool open_fds[2] = {true, true};
  std::string* sinks[2] = {&result.out, &result.err};

  while (open_fds[0] || open_fds[1]) {
    int timeout_ms = -1;
    if (deadline) {
      auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
          *deadline - std::chrono::steady_clock::now());
      if (remaining.count() <= 0) {
        result.timed_out = true;
        break;
      }
      timeout_ms = static_cast<int>(remaining.count());
    }
    for (int i = 0; i < 2; ++i) fds[i].events = open_fds[i] ? POLLIN : 0;
    int rc = ::poll(fds, 2, timeout_ms);
    if (rc < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (rc == 0) {  // deadline hit
      result.timed_out = true;
      break;
    }
    for (int i = 0; i < 2; ++i) {
      if (!open_fds[i]) continue;
      if (fds[i].revents & POLLIN) {
        char buf[8192];
        ssize_t n = ::read(fds[i].fd, buf, sizeof(buf));
        if (n > 0)
          sinks[i]->append(buf, static_cast<size_t>(n));
        else if (n == 0)
          open_fds[i] = false;
      } else if (fds[i].revents & (POLLHUP | POLLERR)) {
        drain(fds[i].fd, *sinks[i]);
        open_fds[i] = false;
      }
    }
  }

  if (result.timed_out) {
    ::kill(pid, SIGKILL);
  }

  ::close(out_pipe[0]);
  ::close(err_pipe[0]);

  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (WIFEXITED(status))
    result.exit_code = WEXITSTATUS(status);
  else if (WIFSIGNALED(status))
    result.exit_code = 128 + WTERMSIG(status);
  return result;
}

}  // namespace ossrecon
