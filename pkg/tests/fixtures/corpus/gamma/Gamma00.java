package gamma.generated;

/** Generated fixture class Gamma00. */
public class Gamma00 {
    private final java.util.Map<String, String> attributes = new java.util.HashMap<>();

    java.util.Map<String, Integer> tally00(String[] words) {
        /*
         * counts how many times each buffer word appears
         */
        java.util.Map<String, Integer> counts = new java.util.HashMap<>();
        for (String word : words) {
            counts.merge(word, 1, Integer::sum);
        }

        counts.remove("");
        return counts;
    }

    int pick01(int[] options) {
        /** stray doc marker stays excluded */
        int best = options[0];
        for (int option : options) {
            best = Math.max(best, option);
        }
        return best;
    }
}
