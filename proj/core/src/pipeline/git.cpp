#include "deltamsg/pipeline/git.hpp"

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <sstream>

#include "deltamsg/errors.hpp"

namespace deltamsg::pipeline {

namespace {

void close_fd(int& fd) {
  if (fd >= 0) ::close(fd);
  fd = -1;
}

std::string join_command(const std::vector<std::string>& argv) {
  std::string s;
  for (const auto& a : argv) s += (s.empty() ? "" : " ") + a;
  return s;
}

}  // namespace

ProcessResult run_git(const std::filesystem::path& repo, const std::vector<std::string>& args) {
  std::vector<std::string> argv{"git", "-C", repo.string()};
  argv.insert(argv.end(), args.begin(), args.end());
  std::vector<char*> cargv;
  for (auto& a : argv) cargv.push_back(a.data());
  cargv.push_back(nullptr);

  int out_pipe[2], err_pipe[2];
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) throw IoError(std::string("pipe: ") + std::strerror(errno));
  if (::pipe2(err_pipe, O_CLOEXEC) != 0) {
    ::close(out_pipe[0]);
    ::close(out_pipe[1]);
    throw IoError(std::string("pipe: ") + std::strerror(errno));
  }
  const pid_t pid = ::fork();
  if (pid < 0) throw IoError(std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::dup2(err_pipe[1], STDERR_FILENO);
    const int devnull = ::open("/dev/null", O_RDONLY);
    if (devnull >= 0) ::dup2(devnull, STDIN_FILENO);
    ::execvp("git", cargv.data());
    const char msg[] = "cannot execute git\n";
    [[maybe_unused]] auto n = ::write(STDERR_FILENO, msg, sizeof msg - 1);
    ::_exit(127);
  }
  ::close(out_pipe[1]);
  ::close(err_pipe[1]);
  int fds[2] = {out_pipe[0], err_pipe[0]};
  ProcessResult r;
  std::string* sinks[2] = {&r.out, &r.err};
  char buf[65536];
  while (fds[0] >= 0 || fds[1] >= 0) {
    pollfd p[2];
    nfds_t n = 0;
    int which[2];
    for (int i = 0; i < 2; ++i) {
      if (fds[i] >= 0) {
        p[n] = {fds[i], POLLIN, 0};
        which[n++] = i;
      }
    }
    if (::poll(p, n, -1) < 0) {
      if (errno == EINTR) continue;
      break;
    }
    for (nfds_t k = 0; k < n; ++k) {
      if (!(p[k].revents & (POLLIN | POLLHUP | POLLERR))) continue;
      const ssize_t got = ::read(p[k].fd, buf, sizeof buf);
      if (got > 0) {
        sinks[which[k]]->append(buf, static_cast<std::size_t>(got));
      } else if (got == 0 || errno != EINTR) {
        close_fd(fds[which[k]]);
      }
    }
  }
  close_fd(fds[0]);
  close_fd(fds[1]);
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  r.status = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
  return r;
}

namespace {

class Git {
 public:
  explicit Git(std::filesystem::path repo) : repo_(std::move(repo)) {}

  std::string operator()(const std::vector<std::string>& args) const {
    ProcessResult r = run_git(repo_, args);
    if (r.status != 0) {
      std::vector<std::string> argv{"git", "-C", repo_.string()};
      argv.insert(argv.end(), args.begin(), args.end());
      throw GitCommandFailed(join_command(argv), r.status, r.err);
    }
    return std::move(r.out);
  }

 private:
  std::filesystem::path repo_;
};

bool is_java(const std::string& path) {
  return path.size() > 5 && path.compare(path.size() - 5, 5, ".java") == 0;
}

struct Change {
  char status;
  std::string path;
};

std::vector<Change> parse_name_status(const std::string& z) {
  std::vector<Change> out;
  std::vector<std::string> fields;
  std::size_t pos = 0;
  while (pos < z.size()) {
    auto end = z.find('\0', pos);
    if (end == std::string::npos) end = z.size();
    fields.push_back(z.substr(pos, end - pos));
    pos = end + 1;
  }
  for (std::size_t i = 0; i + 1 < fields.size(); i += 2) {
    if (fields[i].empty()) continue;
    out.push_back({fields[i][0], fields[i + 1]});
  }
  return out;
}

}  // namespace

std::vector<corpus::CommitRecord> extract_commits(const std::filesystem::path& repo, const std::string& range,
                                                  ExtractSummary* summary) {
  const ProcessResult probe = run_git(repo, {"rev-parse", "--show-toplevel"});
  if (probe.status != 0) throw NotARepo(repo.string() + " is not a git repository");
  std::string top = probe.out;
  while (!top.empty() && (top.back() == '\n' || top.back() == '\r')) top.pop_back();
  const std::string repo_name = std::filesystem::path(top).filename().string();

  const Git git(repo);
  ExtractSummary s;
  std::vector<corpus::CommitRecord> out;
  std::istringstream revs(git({"rev-list", "--reverse", "--parents", range, "--"}));
  std::string line;
  while (std::getline(revs, line)) {
    std::istringstream parts(line);
    std::string sha, parent, extra;
    parts >> sha >> parent >> extra;
    if (sha.empty()) continue;
    ++s.commits;
    if (!extra.empty()) {
      ++s.merges_skipped;
      continue;
    }
    std::vector<std::string> diff_args{"diff-tree", "--no-commit-id", "-r", "--no-renames", "--name-status", "-z"};
    if (parent.empty()) {
      diff_args.push_back("--root");
      diff_args.push_back(sha);
    } else {
      diff_args.push_back(parent);
      diff_args.push_back(sha);
    }
    const auto changes = parse_name_status(git(diff_args));
    std::string message;
    bool have_message = false;
    for (const auto& c : changes) {
      if (!is_java(c.path)) continue;
      if (!have_message) {
        message = git({"show", "-s", "--format=%B", sha});
        while (!message.empty() && message.back() == '\n') message.pop_back();
        have_message = true;
      }
      corpus::CommitRecord r;
      r.repo = repo_name;
      r.sha = sha;
      r.path = c.path;
      r.message_raw = message;
      r.message = corpus::first_line(message);
      if (c.status != 'A' && !parent.empty()) r.old_text = git({"cat-file", "blob", parent + ":" + c.path});
      if (c.status != 'D') r.new_text = git({"cat-file", "blob", sha + ":" + c.path});
      std::vector<std::string> patch{"diff-tree", "--no-commit-id", "-p", "--no-color", "--no-ext-diff", "--no-renames"};
      if (parent.empty()) {
        patch.insert(patch.end(), {"--root", sha});
      } else {
        patch.insert(patch.end(), {parent, sha});
      }
      patch.insert(patch.end(), {"--", c.path});
      r.diff_text = git(patch);
      out.push_back(std::move(r));
      ++s.records;
    }
  }
  if (summary) *summary = s;
  return out;
}

}  // namespace deltamsg::pipeline
