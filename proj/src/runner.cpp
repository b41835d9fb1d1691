#include "usat/runner.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstring>
#include <mutex>

#include "json.hpp"

extern char** environ;

namespace usat {

std::string encode_run_request(std::size_t index,
                               const std::map<std::string, double>& factors) {
  nlohmann::ordered_json req;
  req["run"] = index;
  nlohmann::ordered_json f = nlohmann::ordered_json::object();
  for (const auto& [id, value] : factors) f[id] = value;
  req["factors"] = std::move(f);
  return req.dump();
}

std::map<std::string, double> decode_run_response(const std::string& text) {
  std::string line = text;
  if (!line.empty() && line.back() == '\n') line.pop_back();
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.find('\n') != std::string::npos)
    throw RunnerProtocolError("expected exactly one response line");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw RunnerProtocolError(std::string("response is not JSON: ") + e.what());
  }
  if (!j.is_object() || j.size() != 1 || !j.contains("metrics") || !j["metrics"].is_object())
    throw RunnerProtocolError("response must be {\"metrics\": {...}}");
  std::map<std::string, double> out;
  for (const auto& [name, value] : j["metrics"].items()) {
    if (!value.is_number())
      throw RunnerProtocolError("metric '" + name + "' is not a number");
    out[name] = value.get<double>();
  }
  return out;
}

namespace {

class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  Fd(Fd&& o) noexcept : fd_(o.release()) {}
  Fd& operator=(Fd&& o) noexcept {
    reset(o.release());
    return *this;
  }
  ~Fd() { reset(); }
  int get() const { return fd_; }
  int release() { return std::exchange(fd_, -1); }
  void reset(int fd = -1) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = fd;
  }

 private:
  int fd_ = -1;
};

struct Pipe {
  Fd read;
  Fd write;
};

Pipe make_pipe() {
  int fds[2];
  if (::pipe2(fds, O_CLOEXEC) != 0)
    throw RunnerSpawnError(std::string("pipe: ") + std::strerror(errno));
  return Pipe{Fd(fds[0]), Fd(fds[1])};
}

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

}  // namespace

SubprocessRunner::SubprocessRunner(std::string command) : command_(std::move(command)) {
  ignore_sigpipe();
}

RunOutcome SubprocessRunner::run(std::size_t index,
                                 const std::map<std::string, double>& factors) const {
  const std::string request = encode_run_request(index, factors) + "\n";
  Pipe in = make_pipe();
  Pipe out = make_pipe();
  Pipe err = make_pipe();

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in.read.get(), 0);
  posix_spawn_file_actions_adddup2(&actions, out.write.get(), 1);
  posix_spawn_file_actions_adddup2(&actions, err.write.get(), 2);
  const char* argv[] = {"/bin/sh", "-c", command_.c_str(), nullptr};
  pid_t pid = 0;
  const int rc = ::posix_spawn(&pid, "/bin/sh", &actions, nullptr,
                               const_cast<char* const*>(argv), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) throw RunnerSpawnError("cannot start '" + command_ + "': " + std::strerror(rc));
  in.read.reset();
  out.write.reset();
  err.write.reset();

  std::string stdout_text;
  std::string stderr_text;
  std::size_t written = 0;
  while (in.write.get() >= 0 || out.read.get() >= 0 || err.read.get() >= 0) {
    pollfd fds[3] = {{in.write.get(), POLLOUT, 0},
                     {out.read.get(), POLLIN, 0},
                     {err.read.get(), POLLIN, 0}};
    if (::poll(fds, 3, -1) < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (fds[0].fd >= 0 && fds[0].revents) {
      const ssize_t n = ::write(in.write.get(), request.data() + written, request.size() - written);
      if (n < 0 && errno != EINTR && errno != EAGAIN) {
        // Runner closed stdin early; its answer still counts.
        in.write.reset();
      } else if (n > 0 && (written += static_cast<std::size_t>(n)) == request.size()) {
        in.write.reset();
      }
    }
    for (int k : {1, 2}) {
      if (fds[k].fd < 0 || !fds[k].revents) continue;
      char buf[4096];
      const ssize_t n = ::read(fds[k].fd, buf, sizeof buf);
      if (n > 0) {
        (k == 1 ? stdout_text : stderr_text).append(buf, static_cast<std::size_t>(n));
      } else if (n == 0 || (errno != EINTR && errno != EAGAIN)) {
        (k == 1 ? out.read : err.read).reset();
      }
    }
  }
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }

  RunOutcome outcome;
  auto with_stderr = [&](std::string msg) {
    if (!stderr_text.empty()) msg += "; stderr: " + stderr_text;
    while (!msg.empty() && (msg.back() == '\n' || msg.back() == '\r')) msg.pop_back();
    return msg;
  };
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    outcome.diagnostics = with_stderr(
        WIFEXITED(status) ? "runner exited with status " + std::to_string(WEXITSTATUS(status))
                          : "runner terminated by signal " + std::to_string(WTERMSIG(status)));
    return outcome;
  }
  try {
    outcome.metrics = decode_run_response(stdout_text);
    outcome.ok = true;
  } catch (const RunnerProtocolError& e) {
    outcome.diagnostics = with_stderr(std::string("protocol error: ") + e.what());
  }
  return outcome;
}

AffineRunner::AffineRunner(std::map<std::string, Model> models) : models_(std::move(models)) {
  if (models_.empty()) throw InvalidArgument("affine runner needs at least one metric");
}

namespace {

double parse_coefficient(std::string_view text, const std::string& spec) {
  double v = 0.0;
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty() || !std::isfinite(v))
    throw InvalidArgument("bad number '" + std::string(text) + "' in runner spec '" + spec + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

}  // namespace

AffineRunner AffineRunner::from_spec(const std::string& spec) {
  std::map<std::string, Model> models;
  for (std::string_view block : split(spec, ';')) {
    const auto colon = block.find(':');
    if (colon == std::string_view::npos || colon == 0)
      throw InvalidArgument("runner spec block '" + std::string(block) + "' needs <metric>:<c0>");
    const std::string metric(block.substr(0, colon));
    auto terms = split(block.substr(colon + 1), ',');
    Model model;
    model.intercept = parse_coefficient(terms.front(), spec);
    for (std::size_t i = 1; i < terms.size(); ++i) {
      const auto eq = terms[i].rfind('=');
      if (eq == std::string_view::npos || eq == 0)
        throw InvalidArgument("runner spec term '" + std::string(terms[i]) + "' needs <id>=<coef>");
      const std::string id(terms[i].substr(0, eq));
      if (!model.coefficients.emplace(id, parse_coefficient(terms[i].substr(eq + 1), spec)).second)
        throw InvalidArgument("factor '" + id + "' repeated in runner spec");
    }
    if (!models.emplace(metric, std::move(model)).second)
      throw InvalidArgument("metric '" + metric + "' repeated in runner spec");
  }
  return AffineRunner(std::move(models));
}

RunOutcome AffineRunner::run(std::size_t,
                             const std::map<std::string, double>& factors) const {
  RunOutcome outcome;
  for (const auto& [metric, model] : models_) {
    double y = model.intercept;
    for (const auto& [id, x] : factors) {
      auto c = model.coefficients.find(id);
      if (c != model.coefficients.end()) y += c->second * x;
    }
    outcome.metrics[metric] = y;
  }
  outcome.ok = true;
  return outcome;
}

}  // namespace usat
