package alpha.generated;

/** Generated fixture class Alpha14. */
public class Alpha14 {
    private final java.util.Map<String, String> attributes = new java.util.HashMap<>();

    String find140(java.util.Map<String, String> index, String key) {
        // TODO handle null order keys
        if (key == null) {
            return "";
        }
        String hit = index.get(key);
        return hit == null ? "" : hit;
    }

    Object with141(String key, String value) {
        // usage: call before build to register report defaults
        attributes.put(key, value);
        return this;
    }

    void render142(StringBuilder out) {
        // ---------- order header ----------
        out.append("begin");
        out.append("order");

        // ---------- order body ----------
        out.append("middle"); // keep the middle marker
        out.append("end");
    }
}
