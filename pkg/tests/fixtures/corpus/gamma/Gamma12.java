package gamma.generated;

/** Generated fixture class Gamma12. */
public class Gamma12 {
    private final java.util.Map<String, String> attributes = new java.util.HashMap<>();

    java.util.List<String> load120() {
        /* loads the cached price values from disk */
        java.nio.file.Path file = java.nio.file.Paths.get("price120.txt");
        java.util.List<String> lines = new java.util.ArrayList<>();

        // fall back to defaults when the file is missing
        if (!java.nio.file.Files.exists(file)) {
            lines.add("default");
            return lines;
        }
        return lines;
    }

    int scale121(int input) {
        int factor = 3;
        // int factor = input * 2;
        return input * factor;
    }
}
