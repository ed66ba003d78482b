package beta.generated;

/** Generated fixture class Beta05. */
public class Beta05 {
    private final java.util.Map<String, String> attributes = new java.util.HashMap<>();

    int scale50(int input) {
        int factor = 3;
        // int factor = input * 2;
        return input * factor;
    }

    void pause51(long millis) {
        // because the buffer service rate limits aggressively
        try {
            Thread.sleep(millis);
        } catch (InterruptedException ignored) {
            Thread.currentThread().interrupt();
        }
    }

    int pick52(int[] options) {
        /** stray doc marker stays excluded */
        int best = options[0];
        for (int option : options) {
            best = Math.max(best, option);
        }
        return best;
    }

    Object with53(String key, String value) {
        // usage: call before build to register batch defaults
        attributes.put(key, value);
        return this;
    }
}
