// unigen-support v1.0.0 — do not edit
using System;
using System.Reflection;
using UnityEditor;
using UnityEngine;

namespace UniGenSupport
{
    /// <summary>
    /// Stable batch entry point: finds the generated SceneBuilder by
    /// reflection (so this file compiles even when generation failed),
    /// runs it, and exits 0 on success, 1 on any failure.
    /// Invoke with: -batchmode -executeMethod UniGenSupport.SceneBuildEntry.Run
    /// </summary>
    public static class SceneBuildEntry
    {
        private const string BuilderTypeName = "UniGenGenerated.SceneBuilder";

        public static void Run()
        {
            try
            {
                Type builder = FindType(BuilderTypeName);
                if (builder == null)
                {
                    Debug.LogError("SceneBuildEntry: missing type " + BuilderTypeName);
                    EditorApplication.Exit(1);
                    return;
                }
                MethodInfo build = builder.GetMethod(
                    "Build", BindingFlags.Public | BindingFlags.Static);
                if (build == null)
                {
                    Debug.LogError("SceneBuildEntry: " + BuilderTypeName
                        + " has no public static Build method");
                    EditorApplication.Exit(1);
                    return;
                }
                build.Invoke(null, null);
                EditorApplication.Exit(0);
            }
            catch (Exception ex)
            {
                Debug.LogError("SceneBuildEntry: build failed: " + ex);
                EditorApplication.Exit(1);
            }
        }

        private static Type FindType(string fullName)
        {
            foreach (Assembly assembly in AppDomain.CurrentDomain.GetAssemblies())
            {
                Type type = assembly.GetType(fullName);
                if (type != null)
                {
                    return type;
                }
            }
            return null;
        }
    }
}
